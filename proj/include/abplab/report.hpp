#pragma once

// Deterministic report emission: a small JSON value type whose writer sorts
// object keys and prints floats at 17 significant digits, so identical
// results serialize byte-identically. Infinite values map to the strings
// "inf" / "-inf" (plain JSON has no spelling for them).

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace abplab {

class Json {
  public:
    using Array = std::vector<Json>;
    using Object = std::map<std::string, Json>;

    Json() : v_(nullptr) {}
    Json(std::nullptr_t) : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(double d) : v_(d) {}
    Json(int i) : v_(static_cast<double>(i)) {}
    Json(std::size_t n) : v_(static_cast<double>(n)) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}
    Json(Array a) : v_(std::move(a)) {}
    Json(Object o) : v_(std::move(o)) {}

    static Json array_of(const std::vector<double>& values) {
        Array a;
        a.reserve(values.size());
        for (double v : values) a.emplace_back(v);
        return Json(std::move(a));
    }

    template <typename T>
    static Json array_of(const std::vector<T>& values) {
        Array a;
        a.reserve(values.size());
        for (const T& v : values) a.emplace_back(Json(v));
        return Json(std::move(a));
    }

    Json& operator[](const std::string& key) {
        if (!std::holds_alternative<Object>(v_)) v_ = Object{};
        return std::get<Object>(v_)[key];
    }

    std::string dump() const {
        std::string out;
        write(out);
        out.push_back('\n');
        return out;
    }

  private:
    static std::string format_number(double d) {
        if (std::isnan(d)) return "\"nan\"";
        if (std::isinf(d)) return d > 0 ? "\"inf\"" : "\"-inf\"";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        return buf;
    }

    static void escape(const std::string& s, std::string& out) {
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(v_)) {
            out += "null";
        } else if (std::holds_alternative<bool>(v_)) {
            out += std::get<bool>(v_) ? "true" : "false";
        } else if (std::holds_alternative<double>(v_)) {
            out += format_number(std::get<double>(v_));
        } else if (std::holds_alternative<std::string>(v_)) {
            escape(std::get<std::string>(v_), out);
        } else if (std::holds_alternative<Array>(v_)) {
            out.push_back('[');
            const Array& a = std::get<Array>(v_);
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (k) out.push_back(',');
                a[k].write(out);
            }
            out.push_back(']');
        } else {
            out.push_back('{');
            const Object& o = std::get<Object>(v_);
            bool first = true;
            for (const auto& [key, val] : o) {  // std::map iterates sorted
                if (!first) out.push_back(',');
                first = false;
                escape(key, out);
                out.push_back(':');
                val.write(out);
            }
            out.push_back('}');
        }
    }

    std::variant<std::nullptr_t, bool, double, std::string, Array, Object> v_;
};

/// One CSV row per scenario; fixed column order:
/// name,status,checks_total,checks_passed,report_file
struct CsvSummaryRow {
    std::string name;
    bool pass = false;
    std::size_t checks_total = 0;
    std::size_t checks_passed = 0;
    std::string report_file;
};

inline std::string csv_summary(const std::vector<CsvSummaryRow>& rows) {
    std::string out = "name,status,checks_total,checks_passed,report_file\n";
    for (const auto& r : rows) {
        out += r.name;
        out += r.pass ? ",PASS," : ",FAIL,";
        out += std::to_string(r.checks_total);
        out += ",";
        out += std::to_string(r.checks_passed);
        out += ",";
        out += r.report_file;
        out += "\n";
    }
    return out;
}

}  // namespace abplab
