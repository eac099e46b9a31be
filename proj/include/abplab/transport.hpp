#pragma once

// Exact discrete L2-optimal transport on a DiscreteMMSpace: plans, the
// transport cost, dual potential pairs obtained from the basis of an exact
// network-simplex solve, c-transforms and c-superdifferentials, optimality
// certification and displacement interpolation along the geodesic oracle.
//
// The internal LP works with cost d^2/2 so the duals are exactly the
// potentials of the d^2/2 duality; the reported cost is W2 = sqrt(sum pi d^2).

#include "abplab/mmspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace abplab {

struct ProbMeasure {
    std::vector<double> w;  // aligned with space points, >= 0, sums to 1

    static ProbMeasure from_weights(const DiscreteMMSpace& space, std::vector<double> weights) {
        if (weights.size() != space.size())
            throw std::invalid_argument("ProbMeasure: weights must align with space points");
        double sum = 0.0;
        for (double v : weights) {
            if (v < 0.0) throw std::invalid_argument("ProbMeasure: negative weight");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("ProbMeasure: weights must sum to 1, got " +
                                        std::to_string(sum));
        return ProbMeasure{std::move(weights)};
    }

    static ProbMeasure uniform_on(const DiscreteMMSpace& space, const Region& r) {
        if (r.empty()) throw std::invalid_argument("ProbMeasure: empty region");
        const double total = space.mass_of(r);
        std::vector<double> w(space.size(), 0.0);
        for (PointId p : r.ids) w[p] = space.mass(p) / total;
        // remove the normalization round-off so the sum is exactly 1
        double sum = 0.0;
        for (double v : w) sum += v;
        for (double& v : w) v /= sum;
        return ProbMeasure{std::move(w)};
    }

    static ProbMeasure dirac(const DiscreteMMSpace& space, PointId p) {
        std::vector<double> w(space.size(), 0.0);
        w.at(p) = 1.0;
        return ProbMeasure{std::move(w)};
    }

    double density(const DiscreteMMSpace& space, PointId p) const {
        return w[p] / space.mass(p);
    }

    std::vector<PointId> support() const {
        std::vector<PointId> s;
        for (PointId p = 0; p < w.size(); ++p)
            if (w[p] > 0.0) s.push_back(p);
        return s;
    }
};

struct PlanEntry {
    PointId from = 0;
    PointId to = 0;
    double mass = 0.0;
};

struct TransportSolution {
    std::vector<PlanEntry> plan;  // sorted by (from, to), strictly positive masses
    double cost = 0.0;            // W2
    double lp_cost = 0.0;         // sum of plan * d^2/2
    double duality_gap = 0.0;
    std::vector<double> potential;    // phi on the whole space, phi(x0) = 0
    std::vector<double> c_potential;  // phi^c on the whole space
    std::vector<std::pair<PointId, PointId>> superdiff;  // within supports
    std::vector<double> mu_weights;  // marginals kept for interpolation
    std::vector<double> nu_weights;
};

// ---- c-transform -------------------------------------------------------------

/// phi^c(y) = min_{x in A} (d^2(x,y)/2 - phi(x)) for y in B. phi_on_a is
/// aligned with a.ids. Witnesses record the lowest-id minimizer per y.
inline std::vector<double> c_transform(const DiscreteMMSpace& space,
                                       const std::vector<double>& phi_on_a, const Region& a,
                                       const Region& b,
                                       std::vector<PointId>* witnesses = nullptr) {
    if (a.empty() || b.empty()) throw std::invalid_argument("c_transform: empty region");
    if (phi_on_a.size() != a.size())
        throw std::invalid_argument("c_transform: field must align with region A");
    std::vector<double> out(b.size());
    if (witnesses) witnesses->assign(b.size(), 0);
    for (std::size_t bi = 0; bi < b.size(); ++bi) {
        const PointId y = b.ids[bi];
        double best = std::numeric_limits<double>::infinity();
        PointId best_x = a.ids.front();
        for (std::size_t ai = 0; ai < a.size(); ++ai) {
            const PointId x = a.ids[ai];
            const double d = space.dist(x, y);
            const double v = 0.5 * d * d - phi_on_a[ai];
            if (v < best) {
                best = v;
                best_x = x;
            }
        }
        out[bi] = best;
        if (witnesses) (*witnesses)[bi] = best_x;
    }
    return out;
}

inline Region whole_space(const DiscreteMMSpace& space) {
    std::vector<PointId> ids(space.size());
    std::iota(ids.begin(), ids.end(), PointId{0});
    return Region{std::move(ids), RegionKind::VertexSet};
}

/// Whole-space c-transform of a whole-space field.
inline std::vector<double> c_transform(const DiscreteMMSpace& space,
                                       const std::vector<double>& phi) {
    const Region all = whole_space(space);
    return c_transform(space, phi, all, all);
}

// ---- c-superdifferential ------------------------------------------------------

/// Pairs (x, y) with |phi(x) + phi_c(y) - d^2(x,y)/2| <= tol, scanned over
/// A x B (whole space by default). phi_c must be the c-transform of phi up
/// to tol; an inconsistent pair is rejected.
inline std::vector<std::pair<PointId, PointId>> c_superdifferential(
    const DiscreteMMSpace& space, const std::vector<double>& phi,
    const std::vector<double>& phi_c, double tol, const Region* a_opt = nullptr,
    const Region* b_opt = nullptr) {
    if (phi.size() != space.size() || phi_c.size() != space.size())
        throw std::invalid_argument("c_superdifferential: potentials must cover the space");
    const Region all = whole_space(space);
    const Region& a = a_opt ? *a_opt : all;
    const Region& b = b_opt ? *b_opt : all;
    // consistency: phi(x) + phi_c(y) <= d^2/2 + tol everywhere, and every y
    // attains equality somewhere (phi_c is a pointwise min over x)
    for (PointId y : b.ids) {
        double best = std::numeric_limits<double>::infinity();
        for (PointId x : a.ids) {
            const double d = space.dist(x, y);
            best = std::min(best, 0.5 * d * d - phi[x]);
        }
        if (std::abs(best - phi_c[y]) > tol)
            throw std::invalid_argument(
                "c_superdifferential: phi_c is not the c-transform of phi (node " +
                std::to_string(y) + ", defect " + std::to_string(best - phi_c[y]) + ")");
    }
    std::vector<std::pair<PointId, PointId>> pairs;
    for (PointId x : a.ids)
        for (PointId y : b.ids) {
            const double d = space.dist(x, y);
            if (std::abs(phi[x] + phi_c[y] - 0.5 * d * d) <= tol) pairs.push_back({x, y});
        }
    return pairs;
}

// ---- exact solver --------------------------------------------------------------

namespace detail {

/// Transportation-problem network simplex on the complete bipartite graph.
/// Deterministic pivoting: most negative reduced cost, ties to the lowest
/// arc index, with a Bland fallback after a stall.
class TransportSimplex {
  public:
    TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                     std::vector<double> cost)  // row-major ns x nt
        : ns_(supply.size()),
          nt_(demand.size()),
          a_(std::move(supply)),
          b_(std::move(demand)),
          c_(std::move(cost)) {
        flow_.assign(ns_ * nt_, 0.0);
        basic_.assign(ns_ * nt_, 0);
        u_.assign(ns_, 0.0);
        v_.assign(nt_, 0.0);
        double cmax = 0.0;
        for (double x : c_) cmax = std::max(cmax, std::abs(x));
        rc_tol_ = 1e-12 * std::max(1.0, cmax);
        northwest_corner();
        run();
    }

    const std::vector<double>& flow() const { return flow_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& v() const { return v_; }
    double objective() const {
        double s = 0.0;
        for (std::size_t k = 0; k < flow_.size(); ++k) s += flow_[k] * c_[k];
        return s;
    }

  private:
    void northwest_corner() {
        std::vector<double> ar = a_, br = b_;
        std::size_t i = 0, j = 0;
        const std::size_t nbasic = ns_ + nt_ - 1;
        for (std::size_t arcs = 0; arcs < nbasic; ++arcs) {
            const double f = std::min(ar[i], br[j]);
            flow_[i * nt_ + j] = std::max(f, 0.0);
            basic_[i * nt_ + j] = 1;
            ar[i] -= f;
            br[j] -= f;
            if (i + 1 == ns_) {
                ++j;
            } else if (j + 1 == nt_) {
                ++i;
            } else if (ar[i] <= br[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    void compute_potentials() {
        // walk the basis tree from source 0
        std::vector<char> su(ns_, 0), sv(nt_, 0);
        std::vector<std::size_t> stack_src = {0};
        std::vector<std::size_t> stack_snk;
        su[0] = 1;
        u_[0] = 0.0;
        while (!stack_src.empty() || !stack_snk.empty()) {
            if (!stack_src.empty()) {
                const std::size_t i = stack_src.back();
                stack_src.pop_back();
                for (std::size_t j = 0; j < nt_; ++j) {
                    if (basic_[i * nt_ + j] && !sv[j]) {
                        v_[j] = c_[i * nt_ + j] - u_[i];
                        sv[j] = 1;
                        stack_snk.push_back(j);
                    }
                }
            } else {
                const std::size_t j = stack_snk.back();
                stack_snk.pop_back();
                for (std::size_t i = 0; i < ns_; ++i) {
                    if (basic_[i * nt_ + j] && !su[i]) {
                        u_[i] = c_[i * nt_ + j] - v_[j];
                        su[i] = 1;
                        stack_src.push_back(i);
                    }
                }
            }
        }
        for (std::size_t i = 0; i < ns_; ++i)
            if (!su[i]) throw std::logic_error("transport simplex: basis not spanning");
        for (std::size_t j = 0; j < nt_; ++j)
            if (!sv[j]) throw std::logic_error("transport simplex: basis not spanning");
    }

    // tree path from sink j0 back to source i0 through basic arcs; returns
    // the node sequence j0, i1, j1, ..., i0 encoded as alternating indices
    std::vector<std::size_t> tree_path(std::size_t i0, std::size_t j0) const {
        // BFS over the bipartite basis; nodes 0..ns-1 sources, ns.. sinks
        const std::size_t V = ns_ + nt_;
        std::vector<int> parent(V, -1);
        std::vector<char> seen(V, 0);
        std::vector<std::size_t> queue = {ns_ + j0};
        seen[ns_ + j0] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const std::size_t node = queue[qi];
            if (node == i0) break;
            if (node < ns_) {
                const std::size_t i = node;
                for (std::size_t j = 0; j < nt_; ++j)
                    if (basic_[i * nt_ + j] && !seen[ns_ + j]) {
                        seen[ns_ + j] = 1;
                        parent[ns_ + j] = static_cast<int>(node);
                        queue.push_back(ns_ + j);
                    }
            } else {
                const std::size_t j = node - ns_;
                for (std::size_t i = 0; i < ns_; ++i)
                    if (basic_[i * nt_ + j] && !seen[i]) {
                        seen[i] = 1;
                        parent[i] = static_cast<int>(node);
                        queue.push_back(i);
                    }
            }
        }
        if (!seen[i0]) throw std::logic_error("transport simplex: broken basis tree");
        std::vector<std::size_t> path;
        for (int at = static_cast<int>(i0); at != -1; at = parent[at])
            path.push_back(static_cast<std::size_t>(at));
        std::reverse(path.begin(), path.end());  // j0 ... i0
        return path;
    }

    void run() {
        const std::size_t stall_limit = 50 * (ns_ + nt_) * (ns_ + nt_) + 1000;
        const std::size_t hard_limit = 20 * stall_limit;
        std::size_t pivots = 0;
        bool bland = false;
        compute_potentials();
        while (true) {
            // entering arc
            std::size_t enter = flow_.size();
            double best_rc = -rc_tol_;
            for (std::size_t k = 0; k < flow_.size(); ++k) {
                if (basic_[k]) continue;
                const double rc = c_[k] - u_[k / nt_] - v_[k % nt_];
                if (bland) {
                    if (rc < -rc_tol_) {
                        enter = k;
                        break;
                    }
                } else if (rc < best_rc) {
                    best_rc = rc;
                    enter = k;
                }
            }
            if (enter == flow_.size()) return;  // optimal
            const std::size_t ei = enter / nt_, ej = enter % nt_;

            const std::vector<std::size_t> path = tree_path(ei, ej);
            // arcs along the path alternate -, +, -, ... starting at the arc
            // adjacent to the entering sink
            double delta = std::numeric_limits<double>::infinity();
            std::size_t leave = flow_.size();
            for (std::size_t m = 0; m + 1 < path.size(); m += 2) {
                // path alternates sink, source, sink, ...; minus arcs connect
                // path[m] (sink) with path[m+1] (source)
                const std::size_t j = path[m] - ns_;
                const std::size_t i = path[m + 1];
                const std::size_t k = i * nt_ + j;
                if (flow_[k] < delta || (flow_[k] == delta && k < leave)) {
                    delta = flow_[k];
                    leave = k;
                }
            }
            if (leave == flow_.size())
                throw std::logic_error("transport simplex: no leaving arc");
            // apply the cycle update
            flow_[enter] += delta;
            for (std::size_t m = 0; m + 1 < path.size(); ++m) {
                const std::size_t snk = (m % 2 == 0) ? path[m] : path[m + 1];
                const std::size_t src = (m % 2 == 0) ? path[m + 1] : path[m];
                const std::size_t k = src * nt_ + (snk - ns_);
                if (m % 2 == 0) {
                    flow_[k] -= delta;
                } else {
                    flow_[k] += delta;
                }
            }
            basic_[enter] = 1;
            flow_[leave] = 0.0;
            basic_[leave] = 0;
            compute_potentials();
            if (++pivots > stall_limit) bland = true;
            if (pivots > hard_limit)
                throw std::runtime_error("transport simplex: pivot limit exceeded");
        }
    }

    std::size_t ns_, nt_;
    std::vector<double> a_, b_, c_;
    std::vector<double> flow_;
    std::vector<char> basic_;
    std::vector<double> u_, v_;
    double rc_tol_ = 0.0;
};

}  // namespace detail

inline constexpr std::size_t kMaxSupportSize = 5000;

/// Exact optimal transport between mu and nu for the cost d^2/2.
inline TransportSolution solve_w2(const DiscreteMMSpace& space, const ProbMeasure& mu,
                                  const ProbMeasure& nu) {
    if (mu.w.size() != space.size() || nu.w.size() != space.size())
        throw std::invalid_argument("solve_w2: measures must live on the given space");
    double sa = 0.0, sb = 0.0;
    for (double x : mu.w) sa += x;
    for (double x : nu.w) sb += x;
    if (std::abs(sa - sb) > 1e-12)
        throw std::invalid_argument("solve_w2: marginal sums differ (" + std::to_string(sa) +
                                    " vs " + std::to_string(sb) + ")");
    const std::vector<PointId> xs = mu.support();
    const std::vector<PointId> ys = nu.support();
    if (xs.empty() || ys.empty()) throw std::invalid_argument("solve_w2: empty support");
    if (mu.w == nu.w) {
        // canonical degenerate solution: stay-put plan and constant duals
        TransportSolution sol;
        sol.mu_weights = mu.w;
        sol.nu_weights = nu.w;
        for (PointId p : xs) sol.plan.push_back({p, p, mu.w[p]});
        sol.cost = 0.0;
        sol.lp_cost = 0.0;
        sol.duality_gap = 0.0;
        sol.potential.assign(space.size(), 0.0);
        sol.c_potential.assign(space.size(), 0.0);
        const double sd_tol = 1e-9 * (1.0 + space.diameter() * space.diameter());
        const Region supp = Region::of(xs);
        sol.superdiff =
            c_superdifferential(space, sol.potential, sol.c_potential, sd_tol, &supp, &supp);
        return sol;
    }
    if (xs.size() + ys.size() > kMaxSupportSize)
        throw std::invalid_argument(
            "solve_w2: combined support exceeds the exact-solver limit of " +
            std::to_string(kMaxSupportSize) + " points; subsample the measures first");

    const std::size_t ns = xs.size(), nt = ys.size();
    std::vector<double> supply(ns), demand(nt), cost(ns * nt);
    for (std::size_t i = 0; i < ns; ++i) supply[i] = mu.w[xs[i]];
    for (std::size_t j = 0; j < nt; ++j) demand[j] = nu.w[ys[j]];
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double d = space.dist(xs[i], ys[j]);
            cost[i * nt + j] = 0.5 * d * d;
        }

    detail::TransportSimplex simplex(supply, demand, cost);

    TransportSolution sol;
    sol.mu_weights = mu.w;
    sol.nu_weights = nu.w;
    double quad = 0.0;
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double f = simplex.flow()[i * nt + j];
            if (f > 0.0) {
                sol.plan.push_back({xs[i], ys[j], f});
                const double d = space.dist(xs[i], ys[j]);
                quad += f * d * d;
            }
        }
    sol.lp_cost = 0.5 * quad;
    sol.cost = std::sqrt(std::max(quad, 0.0));

    // extend the duals to the whole space through the target-side potentials
    sol.potential.resize(space.size());
    for (PointId x = 0; x < space.size(); ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nt; ++j) {
            const double d = space.dist(x, ys[j]);
            best = std::min(best, 0.5 * d * d - simplex.v()[j]);
        }
        sol.potential[x] = best;
    }
    sol.c_potential = c_transform(space, sol.potential);
    // normalize phi at the lowest-id supported source node
    const double shift = sol.potential[xs.front()];
    for (double& p : sol.potential) p -= shift;
    for (double& p : sol.c_potential) p += shift;

    double dual_value = 0.0;
    for (PointId p = 0; p < space.size(); ++p)
        dual_value += sol.potential[p] * mu.w[p] + sol.c_potential[p] * nu.w[p];
    sol.duality_gap = std::abs(sol.lp_cost - dual_value);
    const double gap_tol = 1e-9 * std::max(1.0, space.diameter() * space.diameter());
    if (sol.duality_gap > gap_tol)
        throw std::runtime_error("solve_w2: duality gap " + std::to_string(sol.duality_gap) +
                                 " exceeds tolerance");

    const double sd_tol = 1e-9 * (1.0 + space.diameter() * space.diameter());
    const Region src = Region::of(xs);
    const Region dst = Region::of(ys);
    sol.superdiff =
        c_superdifferential(space, sol.potential, sol.c_potential, sd_tol, &src, &dst);
    return sol;
}

// ---- certification --------------------------------------------------------------

struct OptimalityReport {
    bool pass = false;
    double tol = 0.0;
    double max_residual = 0.0;  // worst |phi + phi^c - d^2/2| over charged pairs
    std::vector<PlanEntry> violations;
};

/// A plan is certified optimal when every pair charged more than 1e-12 lies
/// in the c-superdifferential of (phi, phi^c) at tolerance tol.
inline OptimalityReport verify_optimality(const DiscreteMMSpace& space,
                                          const std::vector<PlanEntry>& plan,
                                          const std::vector<double>& phi,
                                          const std::vector<double>& phi_c, double tol) {
    OptimalityReport report;
    report.tol = tol;
    for (const PlanEntry& e : plan) {
        if (e.mass <= 1e-12) continue;
        const double d = space.dist(e.from, e.to);
        const double res = std::abs(phi[e.from] + phi_c[e.to] - 0.5 * d * d);
        report.max_residual = std::max(report.max_residual, res);
        if (res > tol) report.violations.push_back(e);
    }
    report.pass = report.violations.empty();
    return report;
}

// ---- displacement interpolation ---------------------------------------------------

/// Push every plan atom (x, y, w) to geo(x, y, t). The endpoints reproduce
/// the marginals exactly.
inline ProbMeasure displacement_interpolate(const DiscreteMMSpace& space,
                                            const TransportSolution& sol, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("displacement_interpolate: t must lie in [0,1]");
    if (!space.has_geo_oracle())
        throw std::invalid_argument(
            "displacement_interpolate: space has no geodesic interpolation oracle");
    if (t == 0.0) return ProbMeasure{sol.mu_weights};
    if (t == 1.0) return ProbMeasure{sol.nu_weights};
    std::vector<double> w(space.size(), 0.0);
    for (const PlanEntry& e : sol.plan) w[space.geo(e.from, e.to, t)] += e.mass;
    return ProbMeasure{std::move(w)};
}

// ---- vertex enumeration (small instances) -----------------------------------------

/// All basic feasible plans of the transport polytope whose cost is within
/// cost_tol of the optimum. Exponential; limited to small supports, used as
/// a tie-breaking fallback when an inequality check fails on one optimal
/// plan of a tiny instance.
inline std::vector<std::vector<PlanEntry>> enumerate_optimal_plans(
    const DiscreteMMSpace& space, const ProbMeasure& mu, const ProbMeasure& nu,
    double cost_tol, std::size_t max_points = 8) {
    const std::vector<PointId> xs = mu.support();
    const std::vector<PointId> ys = nu.support();
    if (xs.size() + ys.size() > max_points)
        throw std::invalid_argument("enumerate_optimal_plans: instance too large");
    const std::size_t ns = xs.size(), nt = ys.size();
    const std::size_t arcs = ns * nt, nbasic = ns + nt - 1;

    std::vector<double> cost(arcs);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double d = space.dist(xs[i], ys[j]);
            cost[i * nt + j] = 0.5 * d * d;
        }

    struct Candidate {
        double cost;
        std::vector<double> flow;
    };
    std::vector<Candidate> candidates;
    double best = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> pick(nbasic);
    std::iota(pick.begin(), pick.end(), 0);
    auto advance = [&]() {
        std::size_t idx = nbasic;
        while (idx > 0) {
            --idx;
            if (pick[idx] + (nbasic - idx) < arcs) {
                ++pick[idx];
                for (std::size_t m = idx + 1; m < nbasic; ++m) pick[m] = pick[m - 1] + 1;
                return true;
            }
        }
        return false;
    };

    do {
        // spanning-tree test via union-find on the bipartite node set
        std::vector<std::size_t> parent(ns + nt);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        bool acyclic = true;
        for (std::size_t k : pick) {
            const std::size_t ri = find(k / nt), rj = find(ns + k % nt);
            if (ri == rj) {
                acyclic = false;
                break;
            }
            parent[ri] = rj;
        }
        if (!acyclic) continue;

        // solve the tree system by leaf stripping
        std::vector<double> rem_a(ns), rem_b(nt);
        for (std::size_t i = 0; i < ns; ++i) rem_a[i] = mu.w[xs[i]];
        for (std::size_t j = 0; j < nt; ++j) rem_b[j] = nu.w[ys[j]];
        std::vector<std::size_t> deg(ns + nt, 0);
        for (std::size_t k : pick) {
            deg[k / nt]++;
            deg[ns + k % nt]++;
        }
        std::vector<char> used(nbasic, 0);
        std::vector<double> flow(arcs, 0.0);
        bool feasible = true;
        for (std::size_t round = 0; round < nbasic; ++round) {
            std::size_t chosen = nbasic;
            for (std::size_t m = 0; m < nbasic; ++m) {
                if (used[m]) continue;
                const std::size_t k = pick[m];
                if (deg[k / nt] == 1 || deg[ns + k % nt] == 1) {
                    chosen = m;
                    break;
                }
            }
            if (chosen == nbasic) {
                feasible = false;
                break;
            }
            const std::size_t k = pick[chosen];
            const std::size_t i = k / nt, j = k % nt;
            const double f = (deg[i] == 1) ? rem_a[i] : rem_b[j];
            if (f < -1e-12) {
                feasible = false;
                break;
            }
            flow[k] = f;
            rem_a[i] -= f;
            rem_b[j] -= f;
            deg[i]--;
            deg[ns + j]--;
            used[chosen] = 1;
        }
        if (!feasible) continue;
        double total = 0.0;
        for (std::size_t k = 0; k < arcs; ++k) total += flow[k] * cost[k];
        if (total < best - cost_tol) {
            best = total;
            candidates.clear();
        }
        if (total <= best + cost_tol) candidates.push_back({total, flow});
    } while (advance());

    std::vector<std::vector<PlanEntry>> out;
    for (const Candidate& c : candidates) {
        if (c.cost > best + cost_tol) continue;
        std::vector<PlanEntry> plan;
        for (std::size_t k = 0; k < arcs; ++k)
            if (c.flow[k] > 1e-15) plan.push_back({xs[k / nt], ys[k % nt], c.flow[k]});
        out.push_back(std::move(plan));
    }
    return out;
}

// ---- entropic cross-check solver ---------------------------------------------------

/// Sinkhorn iteration for the regularized problem; approximate W2 used only
/// to sanity-check large instances, never in certified paths.
inline double entropic_w2(const DiscreteMMSpace& space, const ProbMeasure& mu,
                          const ProbMeasure& nu, double reg, std::size_t max_iters = 5000) {
    if (!(reg > 0.0)) throw std::invalid_argument("entropic_w2: reg must be positive");
    const std::vector<PointId> xs = mu.support();
    const std::vector<PointId> ys = nu.support();
    const std::size_t ns = xs.size(), nt = ys.size();
    std::vector<double> K(ns * nt), d2(ns * nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double d = space.dist(xs[i], ys[j]);
            d2[i * nt + j] = d * d;
            K[i * nt + j] = std::exp(-0.5 * d * d / reg);
        }
    std::vector<double> uu(ns, 1.0), vv(nt, 1.0);
    for (std::size_t it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < ns; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < nt; ++j) s += K[i * nt + j] * vv[j];
            uu[i] = mu.w[xs[i]] / std::max(s, 1e-300);
        }
        for (std::size_t j = 0; j < nt; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < ns; ++i) s += K[i * nt + j] * uu[i];
            vv[j] = nu.w[ys[j]] / std::max(s, 1e-300);
        }
    }
    double quad = 0.0;
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            quad += uu[i] * K[i * nt + j] * vv[j] * d2[i * nt + j];
    return std::sqrt(std::max(quad, 0.0));
}

}  // namespace abplab
