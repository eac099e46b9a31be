#pragma once

// Minimal arithmetic expression grammar for declarative scenario fields:
// +, -, *, /, ^ (right-associative), abs, min, max, sin, cos, exp and the
// coordinates x1..x3, evaluated per node.

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace abplab {

class Expression {
  public:
    static Expression parse(const std::string& text) {
        Parser p(text);
        Expression e;
        e.root_ = p.parse_sum();
        p.skip_ws();
        if (!p.done())
            throw std::invalid_argument("expression: trailing input at '" + p.rest() + "'");
        return e;
    }

    /// Evaluate with coordinates (missing axes are an error when referenced).
    double eval(const std::vector<double>& coords) const { return root_->eval(coords); }

  private:
    struct Node {
        virtual ~Node() = default;
        virtual double eval(const std::vector<double>&) const = 0;
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Constant : Node {
        double value;
        explicit Constant(double v) : value(v) {}
        double eval(const std::vector<double>&) const override { return value; }
    };
    struct Coordinate : Node {
        std::size_t axis;
        explicit Coordinate(std::size_t a) : axis(a) {}
        double eval(const std::vector<double>& c) const override {
            if (axis >= c.size())
                throw std::invalid_argument("expression: coordinate x" +
                                            std::to_string(axis + 1) +
                                            " unavailable on this space");
            return c[axis];
        }
    };
    struct Unary : Node {
        char op;  // '-' or function tag
        NodePtr arg;
        Unary(char o, NodePtr a) : op(o), arg(std::move(a)) {}
        double eval(const std::vector<double>& c) const override {
            const double v = arg->eval(c);
            switch (op) {
                case '-': return -v;
                case 'a': return std::abs(v);
                case 's': return std::sin(v);
                case 'c': return std::cos(v);
                case 'e': return std::exp(v);
            }
            return v;
        }
    };
    struct Binary : Node {
        char op;
        NodePtr lhs, rhs;
        Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
        double eval(const std::vector<double>& c) const override {
            const double a = lhs->eval(c);
            const double b = rhs->eval(c);
            switch (op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
                case 'm': return std::min(a, b);
                case 'M': return std::max(a, b);
            }
            return 0.0;
        }
    };

    class Parser {
      public:
        explicit Parser(const std::string& s) : s_(s) {}

        NodePtr parse_sum() {
            NodePtr lhs = parse_product();
            while (true) {
                skip_ws();
                if (consume('+')) {
                    lhs = std::make_shared<Binary>('+', lhs, parse_product());
                } else if (consume('-')) {
                    lhs = std::make_shared<Binary>('-', lhs, parse_product());
                } else {
                    return lhs;
                }
            }
        }

        void skip_ws() {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        bool done() const { return pos_ >= s_.size(); }
        std::string rest() const { return s_.substr(pos_); }

      private:
        NodePtr parse_product() {
            NodePtr lhs = parse_unary();
            while (true) {
                skip_ws();
                if (consume('*')) {
                    lhs = std::make_shared<Binary>('*', lhs, parse_unary());
                } else if (consume('/')) {
                    lhs = std::make_shared<Binary>('/', lhs, parse_unary());
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_unary() {
            skip_ws();
            if (consume('-')) return std::make_shared<Unary>('-', parse_unary());
            if (consume('+')) return parse_unary();
            return parse_power();
        }

        NodePtr parse_power() {
            NodePtr base = parse_atom();
            skip_ws();
            if (consume('^')) {
                // right-associative through the unary level
                return std::make_shared<Binary>('^', base, parse_unary());
            }
            return base;
        }

        NodePtr parse_atom() {
            skip_ws();
            if (done()) throw std::invalid_argument("expression: unexpected end of input");
            const char c = s_[pos_];
            if (c == '(') {
                ++pos_;
                NodePtr inner = parse_sum();
                expect(')');
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
            throw std::invalid_argument(std::string("expression: unexpected character '") + c +
                                        "'");
        }

        NodePtr parse_number() {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return std::make_shared<Constant>(v);
        }

        NodePtr parse_name() {
            std::size_t end = pos_;
            while (end < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
                ++end;
            const std::string name = s_.substr(pos_, end - pos_);
            pos_ = end;
            if (name == "x1") return std::make_shared<Coordinate>(0);
            if (name == "x2") return std::make_shared<Coordinate>(1);
            if (name == "x3") return std::make_shared<Coordinate>(2);
            if (name == "abs") return parse_call1('a');
            if (name == "sin") return parse_call1('s');
            if (name == "cos") return parse_call1('c');
            if (name == "exp") return parse_call1('e');
            if (name == "min") return parse_call2('m');
            if (name == "max") return parse_call2('M');
            throw std::invalid_argument("expression: unknown name '" + name + "'");
        }

        NodePtr parse_call1(char tag) {
            expect('(');
            NodePtr a = parse_sum();
            expect(')');
            return std::make_shared<Unary>(tag, a);
        }

        NodePtr parse_call2(char tag) {
            expect('(');
            NodePtr a = parse_sum();
            expect(',');
            NodePtr b = parse_sum();
            expect(')');
            return std::make_shared<Binary>(tag, a, b);
        }

        bool consume(char c) {
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        void expect(char c) {
            if (!consume(c))
                throw std::invalid_argument(std::string("expression: expected '") + c + "'");
        }

        const std::string& s_;
        std::size_t pos_ = 0;
    };

    NodePtr root_;
};

}  // namespace abplab
