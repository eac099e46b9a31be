#pragma once

// Contact sets of quadratic and distance-type touching functions, the
// distance transform u^d on the vertex set, and c-concave upper
// representatives of -t u built from the touching values.

#include "abplab/mmspace.hpp"
#include "abplab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace abplab {

/// Per-point real field aligned with a space's point order.
struct ScalarField {
    std::vector<double> values;

    double operator[](PointId p) const { return values[p]; }
    std::size_t size() const { return values.size(); }

    double oscillation() const {
        if (values.empty()) return 0.0;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return *hi - *lo;
    }
};

enum class ContactKind { R2, R1, R1Star };

inline const char* to_string(ContactKind k) {
    switch (k) {
        case ContactKind::R2: return "r2";
        case ContactKind::R1: return "r1";
        case ContactKind::R1Star: return "r1star";
    }
    return "?";
}

struct ContactSetResult {
    ContactKind kind = ContactKind::R2;
    double opening = 0.0;  // t; zero for R1Star
    std::vector<PointId> members;                 // sorted, subset of closure(Omega)
    std::vector<std::vector<PointId>> witnesses;  // aligned with members, sorted ids
    std::vector<double> residuals;                // aligned: best equality defect
    bool r1_surjectivity = true;  // meaningful for kind R1 only
    double tol_eq = 0.0;
    double tol_dist = 0.0;

    bool contains(PointId p) const {
        return std::binary_search(members.begin(), members.end(), p);
    }
    Region region() const { return Region::of(members); }
};

/// Scale-aware default equality tolerance for comparing touching-function
/// infima in floating point.
inline double default_tol_eq(const DiscreteMMSpace& space, const ScalarField& u,
                             ContactKind kind, double t) {
    const double diam = space.diameter();
    const double scale = (kind == ContactKind::R2) ? diam * diam / (2.0 * t) : diam;
    return 1e-9 * (1.0 + u.oscillation() + scale);
}

/// Members of the requested contact set inside the closure of Omega.
/// R2: u + d^2_y/(2t) attains the infimum over the closure;
/// R1: same with u + d_y and the extra band constraint |d(x,y) - t| <= tol_dist;
/// R1Star: u + d_y infimum with no distance constraint.
inline ContactSetResult compute_contact_set(const DiscreteMMSpace& space, const Region& d_set,
                                            const Region& omega, const ScalarField& u,
                                            double t, ContactKind kind, double tol_eq,
                                            double tol_dist) {
    if (d_set.empty()) throw std::invalid_argument("compute_contact_set: empty vertex set D");
    if (kind != ContactKind::R1Star && !(t > 0.0))
        throw std::invalid_argument("compute_contact_set: opening t must be positive");
    if (u.size() != space.size())
        throw std::invalid_argument("compute_contact_set: field must cover the space");

    const Region cl = closure(space, omega);
    ContactSetResult out;
    out.kind = kind;
    out.opening = (kind == ContactKind::R1Star) ? 0.0 : t;
    out.tol_eq = tol_eq;
    out.tol_dist = tol_dist;

    auto touching = [&](PointId x, PointId y) {
        const double d = space.dist(x, y);
        return (kind == ContactKind::R2) ? u[x] + d * d / (2.0 * t) : u[x] + d;
    };

    // per-vertex infima over the closure
    std::vector<double> inf_y(d_set.size(), std::numeric_limits<double>::infinity());
    for (std::size_t yi = 0; yi < d_set.size(); ++yi)
        for (PointId x : cl.ids)
            inf_y[yi] = std::min(inf_y[yi], touching(x, d_set.ids[yi]));

    std::vector<std::vector<PointId>> witness_of;
    std::vector<double> residual_of;
    std::vector<PointId> members;
    std::vector<char> surjective(d_set.size(), 0);
    for (PointId x : cl.ids) {
        std::vector<PointId> wit;
        double best_res = std::numeric_limits<double>::infinity();
        for (std::size_t yi = 0; yi < d_set.size(); ++yi) {
            const PointId y = d_set.ids[yi];
            const double res = touching(x, y) - inf_y[yi];
            if (res > tol_eq) continue;
            if (kind == ContactKind::R1 && std::abs(space.dist(x, y) - t) > tol_dist) continue;
            wit.push_back(y);
            best_res = std::min(best_res, std::max(res, 0.0));
            surjective[yi] = 1;
        }
        if (!wit.empty()) {
            members.push_back(x);
            witness_of.push_back(std::move(wit));
            residual_of.push_back(best_res);
        }
    }
    out.members = std::move(members);
    out.witnesses = std::move(witness_of);
    out.residuals = std::move(residual_of);
    if (kind == ContactKind::R1) {
        out.r1_surjectivity =
            std::all_of(surjective.begin(), surjective.end(), [](char c) { return c != 0; });
    }
    return out;
}

/// u^d(y) = min over the closure of Omega of u + d_y, for y in D. The output
/// aligns with d_set.ids; it is 1-Lipschitz on D.
inline std::vector<double> u_d_transform(const DiscreteMMSpace& space, const Region& d_set,
                                         const Region& omega, const ScalarField& u) {
    if (d_set.empty()) throw std::invalid_argument("u_d_transform: empty vertex set D");
    if (u.size() != space.size())
        throw std::invalid_argument("u_d_transform: field must cover the space");
    const Region cl = closure(space, omega);
    std::vector<double> out(d_set.size(), std::numeric_limits<double>::infinity());
    for (std::size_t yi = 0; yi < d_set.size(); ++yi)
        for (PointId x : cl.ids)
            out[yi] = std::min(out[yi], u[x] + space.dist(x, d_set.ids[yi]));
    return out;
}

struct RepresentativeResult {
    ScalarField phi;            // c-concave upper representative of -t u
    ContactSetResult contact;   // the contact set it touches
    std::vector<double> touching_values;  // v(y) on d_set.ids
    double max_contact_residual = 0.0;    // worst |phi + t u| over members
    double min_omega_slack = 0.0;         // min of phi + t u over Omega
};

/// Builds v(y) = min over the closure of (u + d^2_y/(2t)) on D and returns
/// phi = (t v)^c against the vertex set D. The result agrees with -t u on
/// the contact set and dominates -t u on Omega; a defect beyond tolerance
/// reports the worst offender and signals an inconsistent Omega/D/t
/// configuration.
inline RepresentativeResult c_concave_representative(const DiscreteMMSpace& space,
                                                     const Region& d_set, const Region& omega,
                                                     const ScalarField& u, double t,
                                                     ContactKind kind, double tol_eq_in = -1.0,
                                                     double tol_dist_in = -1.0) {
    if (kind == ContactKind::R1Star)
        throw std::invalid_argument(
            "c_concave_representative: representative is defined for the r1/r2 kinds");
    if (!(t > 0.0))
        throw std::invalid_argument("c_concave_representative: opening t must be positive");
    const double tol_eq = tol_eq_in >= 0.0 ? tol_eq_in : default_tol_eq(space, u, kind, t);
    const double tol_dist = tol_dist_in >= 0.0 ? tol_dist_in : space.mesh_size();

    RepresentativeResult out;
    out.contact = compute_contact_set(space, d_set, omega, u, t, kind, tol_eq, tol_dist);
    if (out.contact.members.empty())
        throw std::invalid_argument("c_concave_representative: empty contact set");

    const Region cl = closure(space, omega);
    // quadratic touching values on D
    out.touching_values.assign(d_set.size(), std::numeric_limits<double>::infinity());
    for (std::size_t yi = 0; yi < d_set.size(); ++yi) {
        const PointId y = d_set.ids[yi];
        double best = std::numeric_limits<double>::infinity();
        for (PointId x : cl.ids) {
            const double d = space.dist(x, y);
            best = std::min(best, u[x] + d * d / (2.0 * t));
        }
        out.touching_values[yi] = best;
    }

    // phi = (t v)^c against D
    std::vector<double> tv(d_set.size());
    for (std::size_t yi = 0; yi < d_set.size(); ++yi) tv[yi] = t * out.touching_values[yi];
    const Region all = whole_space(space);
    out.phi.values = c_transform(space, tv, d_set, all);

    // diagnostics: phi = -t u on the contact set, phi >= -t u on Omega
    const double allowance = tol_eq * t;
    double worst_contact = 0.0;
    PointId worst_contact_at = out.contact.members.front();
    for (PointId x : out.contact.members) {
        const double res = std::abs(out.phi.values[x] + t * u[x]);
        if (res > worst_contact) {
            worst_contact = res;
            worst_contact_at = x;
        }
    }
    double worst_slack = std::numeric_limits<double>::infinity();
    PointId worst_slack_at = omega.ids.empty() ? PointId{0} : omega.ids.front();
    for (PointId x : omega.ids) {
        const double slack = out.phi.values[x] + t * u[x];
        if (slack < worst_slack) {
            worst_slack = slack;
            worst_slack_at = x;
        }
    }
    out.max_contact_residual = worst_contact;
    out.min_omega_slack = worst_slack;
    if (worst_contact > allowance)
        throw std::runtime_error(
            "c_concave_representative: touching defect " + std::to_string(worst_contact) +
            " at node " + std::to_string(worst_contact_at) + " exceeds tolerance " +
            std::to_string(allowance) + "; Omega/D/t configuration is inconsistent");
    if (worst_slack < -allowance)
        throw std::runtime_error(
            "c_concave_representative: upper-representative defect " +
            std::to_string(worst_slack) + " at node " + std::to_string(worst_slack_at) +
            " exceeds tolerance " + std::to_string(allowance));
    return out;
}

}  // namespace abplab
