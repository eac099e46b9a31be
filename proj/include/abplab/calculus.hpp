#pragma once

// Discrete Dirichlet form and the graph Laplacian defined against it by
// integration by parts, with the positive-part sup norm and the comparison
// check between the Laplacian of a c-concave representative and -Delta u on
// contact sets.

#include "abplab/contact.hpp"
#include "abplab/mmspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace abplab {

struct DiscreteLaplacian {
    std::vector<double> values;   // per point; meaningful on the interior mask
    std::vector<char> interior;   // complete-stencil mask copied from the space
};

/// E(f, u) = 1/2 sum over ordered neighbor pairs of w (f_i - f_j)(u_i - u_j),
/// i.e. one term per stored undirected edge. Symmetric and bilinear.
inline double dirichlet_energy(const DiscreteMMSpace& space, const ScalarField& f,
                               const ScalarField& u) {
    if (!space.has_edges())
        throw std::invalid_argument("dirichlet_energy: space carries no edges");
    if (f.size() != space.size() || u.size() != space.size())
        throw std::invalid_argument("dirichlet_energy: fields must cover the space");
    double acc = 0.0;
    for (const Edge& e : space.edges())
        acc += e.weight * (f[e.a] - f[e.b]) * (u[e.a] - u[e.b]);
    return acc;
}

/// (Delta u)_i = (1/m_i) sum_j w_ij (u_j - u_i). Satisfies
/// sum_i f_i (Delta u)_i m_i = -E(f, u) for every f.
inline DiscreteLaplacian discrete_laplacian(const DiscreteMMSpace& space, const ScalarField& u) {
    if (!space.has_edges())
        throw std::invalid_argument("discrete_laplacian: space carries no edges");
    if (u.size() != space.size())
        throw std::invalid_argument("discrete_laplacian: field must cover the space");
    DiscreteLaplacian out;
    out.values.assign(space.size(), 0.0);
    out.interior.resize(space.size());
    for (PointId p = 0; p < space.size(); ++p) out.interior[p] = space.interior(p) ? 1 : 0;
    for (const Edge& e : space.edges()) {
        const double flux = e.weight * (u[e.b] - u[e.a]);
        out.values[e.a] += flux;
        out.values[e.b] -= flux;
    }
    for (PointId p = 0; p < space.size(); ++p) out.values[p] /= space.mass(p);
    return out;
}

/// max over closure(Omega) intersected with the interior mask of (Delta u)^+.
/// Nodes of Omega outside the mask are skipped (one-sided stencils carry no
/// Laplacian value).
inline double positive_part_sup_norm(const DiscreteMMSpace& space, const DiscreteLaplacian& lap,
                                     const Region& omega) {
    const Region cl = closure(space, omega);
    double sup = 0.0;
    for (PointId p : cl.ids)
        if (lap.interior[p]) sup = std::max(sup, lap.values[p]);
    return sup;
}

/// True when some node of Omega lies outside the interior mask; callers can
/// surface this as a warning next to the restricted sup norm.
inline bool region_exits_interior(const DiscreteMMSpace& space, const Region& omega) {
    for (PointId p : omega.ids)
        if (!space.interior(p)) return true;
    return false;
}

struct LaplacianComparisonReport {
    bool pass = false;
    double tol = 0.0;
    double min_value = 0.0;          // min over members of (Delta phi + Delta u)
    double min_value_t_scaled = 0.0; // min over members of (Delta phi + t Delta u)
    PointId argmin = 0;
    std::vector<PointId> members;
    std::vector<double> values;      // Delta phi + Delta u per member
};

/// Builds the c-concave representative of -t u through the requested contact
/// set and compares its Laplacian with -Delta u on the members. PASS when
/// min (Delta phi + Delta u) >= -tol.
inline LaplacianComparisonReport laplacian_comparison_check(
    const DiscreteMMSpace& space, const Region& d_set, const Region& omega,
    const ScalarField& u, double t, ContactKind kind, double tol) {
    const RepresentativeResult rep =
        c_concave_representative(space, d_set, omega, u, t, kind);
    for (PointId x : rep.contact.members)
        if (!space.interior(x))
            throw std::invalid_argument(
                "laplacian_comparison_check: contact member " + std::to_string(x) +
                " lies outside the interior mask");
    const DiscreteLaplacian lap_phi = discrete_laplacian(space, rep.phi);
    const DiscreteLaplacian lap_u = discrete_laplacian(space, u);

    LaplacianComparisonReport report;
    report.tol = tol;
    report.members = rep.contact.members;
    report.min_value = std::numeric_limits<double>::infinity();
    report.min_value_t_scaled = std::numeric_limits<double>::infinity();
    for (PointId x : rep.contact.members) {
        const double v = lap_phi.values[x] + lap_u.values[x];
        report.values.push_back(v);
        if (v < report.min_value) {
            report.min_value = v;
            report.argmin = x;
        }
        report.min_value_t_scaled =
            std::min(report.min_value_t_scaled, lap_phi.values[x] + t * lap_u.values[x]);
    }
    report.pass = report.min_value >= -tol;
    return report;
}

}  // namespace abplab
