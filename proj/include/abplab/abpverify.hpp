#pragma once

// Assembly of the contact-set volume estimate with its explicit constants,
// the signed distance field, Minkowski content estimation, and the
// Steiner-type neighborhood-growth experiment with its exterior-sphere and
// mean-convexity diagnostics.

#include "abplab/calculus.hpp"
#include "abplab/contact.hpp"
#include "abplab/distortion.hpp"
#include "abplab/mmspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace abplab {

/// A scenario violates one of the estimate's hypotheses (contact set leaking
/// through the boundary, missing band surjectivity, ...). Carries the name
/// of the violated hypothesis for exact reporting.
struct HypothesisViolation : std::runtime_error {
    std::string hypothesis;
    explicit HypothesisViolation(std::string which, const std::string& detail)
        : std::runtime_error(which + ": " + detail), hypothesis(std::move(which)) {}
};

struct AbpTolerances {
    double tol_eq = -1.0;    // negative: scale-aware default
    double tol_dist = -1.0;  // negative: mesh size
    double tol_slack = 0.0;  // satisfied iff slack >= -tol_slack
};

struct AbpReport {
    ContactKind kind = ContactKind::R2;
    double K = 0.0, N = 2.0, t = 0.0;
    double mass_D = 0.0;
    double mass_R = 0.0;
    double theta_sup = 0.0;  // max distance over D x Omega
    double phi_inf = 0.0;    // min distance over D x Omega
    double laplacian_sup = 0.0;
    double coefficient = 1.0;
    double bound = 0.0;  // mass_R * coefficient
    double slack = 0.0;  // bound - mass_D; -inf when the contact set is empty
    bool satisfied = false;
    bool r1_surjectivity = true;
    std::size_t contact_size = 0;
    // exponential flat-case bound, reported when K = 0
    bool has_exp_bound = false;
    double exp_bound = 0.0;
    double exp_slack = 0.0;
    bool exp_satisfied = false;
    AbpTolerances tolerances;
    double tol_eq_used = 0.0, tol_dist_used = 0.0;
};

/// Contact-set volume estimate: mass(D) <= mass(R_i) * coefficient(K, N, t,
/// L, Theta, Phi), with the exponential variant alongside when K = 0.
inline AbpReport verify_abp(const DiscreteMMSpace& space, const Region& d_set,
                            const Region& omega, const ScalarField& u, double t, double K,
                            double N, ContactKind kind, const AbpTolerances& tols = {}) {
    if (kind == ContactKind::R1Star)
        throw std::invalid_argument("verify_abp: estimate applies to the r1/r2 kinds");
    if (omega.empty()) throw std::invalid_argument("verify_abp: empty Omega");
    AbpReport report;
    report.kind = kind;
    report.K = K;
    report.N = N;
    report.t = t;
    report.tolerances = tols;
    const double tol_eq = tols.tol_eq >= 0.0 ? tols.tol_eq : default_tol_eq(space, u, kind, t);
    const double tol_dist = tols.tol_dist >= 0.0 ? tols.tol_dist : space.mesh_size();
    report.tol_eq_used = tol_eq;
    report.tol_dist_used = tol_dist;

    const ContactSetResult contact =
        compute_contact_set(space, d_set, omega, u, t, kind, tol_eq, tol_dist);
    report.contact_size = contact.members.size();
    report.r1_surjectivity = contact.r1_surjectivity;

    report.mass_D = space.mass_of(d_set);
    report.mass_R = space.mass_of(contact.region());

    report.theta_sup = 0.0;
    report.phi_inf = std::numeric_limits<double>::infinity();
    for (PointId y : d_set.ids)
        for (PointId x : omega.ids) {
            const double d = space.dist(x, y);
            report.theta_sup = std::max(report.theta_sup, d);
            report.phi_inf = std::min(report.phi_inf, d);
        }

    report.laplacian_sup = positive_part_sup_norm(space, discrete_laplacian(space, u), omega);

    if (contact.members.empty()) {
        // contrapositive failure: positive vertex mass with an empty contact
        // set leaves an unbounded deficiency
        report.coefficient =
            abp_coefficient(K, N, t, report.laplacian_sup, report.theta_sup, report.phi_inf)
                .value;
        report.bound = 0.0;
        report.slack = report.mass_D > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
        report.satisfied = !(report.mass_D > 0.0);
        return report;
    }

    for (PointId x : contact.members)
        if (!omega.contains(x))
            throw HypothesisViolation("contact-set-in-omega",
                                      "contact member " + std::to_string(x) +
                                          " touches the boundary of Omega");
    if (kind == ContactKind::R1 && !contact.r1_surjectivity)
        throw HypothesisViolation("r1_surjectivity",
                                  "some vertex of D has no contact point at distance t");

    const AbpCoefficient coef =
        abp_coefficient(K, N, t, report.laplacian_sup, report.theta_sup, report.phi_inf);
    report.coefficient = coef.value;
    report.bound = report.mass_R * coef.value;
    report.slack = report.bound - report.mass_D;
    report.satisfied = report.slack >= -tols.tol_slack;
    if (coef.has_exp_bound) {
        report.has_exp_bound = true;
        report.exp_bound = report.mass_R * coef.exp_bound;
        report.exp_slack = report.exp_bound - report.mass_D;
        report.exp_satisfied = report.exp_slack >= -tols.tol_slack;
    }
    return report;
}

/// Signed distance to the boundary of Omega: d(x, Omega) outside, minus
/// d(x, complement) inside. The zero level set falls between lattice nodes,
/// so the field is 1-Lipschitz up to one mesh width of slack across the
/// interface.
inline ScalarField signed_distance(const DiscreteMMSpace& space, const Region& omega) {
    if (omega.empty()) throw std::invalid_argument("signed_distance: empty Omega");
    const Region comp = complement(space, omega);
    if (comp.empty()) throw std::invalid_argument("signed_distance: Omega covers the space");
    const std::vector<double> d_in = distance_to_region(space, omega);
    const std::vector<double> d_out = distance_to_region(space, comp);
    ScalarField u;
    u.values.resize(space.size());
    for (PointId p = 0; p < space.size(); ++p)
        u.values[p] = omega.contains(p) ? -d_out[p] : d_in[p];
    return u;
}

struct MinkowskiReport {
    double content = 0.0;    // extrapolated boundary-measure estimate
    double fit_slope = 0.0;  // linear trend of the ratios in eps
    std::vector<double> eps;
    std::vector<double> mass;   // m(Omega^eps)
    std::vector<double> ratio;  // (m(Omega^eps) - m(Omega)) / eps
};

/// Ratios (m(Omega^eps) - m(Omega)) / eps over a decreasing eps grid and
/// their linear extrapolation to eps -> 0.
inline MinkowskiReport minkowski_content(const DiscreteMMSpace& space, const Region& omega,
                                         const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("minkowski_content: empty eps list");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (eps_list[k] <= space.mesh_size())
            throw std::invalid_argument("minkowski_content: eps " +
                                        std::to_string(eps_list[k]) +
                                        " at or below the mesh size");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
            throw std::invalid_argument("minkowski_content: eps list must decrease");
    }
    const std::vector<double> dist = distance_to_region(space, omega);
    const double m0 = space.mass_of(omega);
    MinkowskiReport report;
    report.eps = eps_list;
    for (double eps : eps_list) {
        const double cut = eps * (1.0 + 1e-12);
        double m = 0.0;
        for (PointId p = 0; p < space.size(); ++p)
            if (dist[p] < cut) m += space.mass(p);
        report.mass.push_back(m);
        report.ratio.push_back((m - m0) / eps);
    }
    // least-squares line ratio = content + slope * eps
    const std::size_t n = eps_list.size();
    if (n == 1) {
        report.content = report.ratio.front();
        return report;
    }
    double se = 0.0, sr = 0.0, see = 0.0, ser = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        se += report.eps[k];
        sr += report.ratio[k];
        see += report.eps[k] * report.eps[k];
        ser += report.eps[k] * report.ratio[k];
    }
    const double denom = static_cast<double>(n) * see - se * se;
    report.fit_slope = (static_cast<double>(n) * ser - se * sr) / denom;
    report.content = (sr - report.fit_slope * se) / static_cast<double>(n);
    return report;
}

struct SteinerParams {
    double H = 0.0;
    double N = 2.0;             // dimension parameter of the annulus exponent
    double sigma_band = 0.1;    // outer width of the mean-convexity band
    double exterior_r = 0.1;    // exterior-sphere radius
    std::vector<double> eps_list;  // decreasing, each above the mesh size
    double band_tol = 0.0;         // allowance in Delta u <= -H + band_tol
    double annulus_tol = 0.0;      // allowance for the annulus inequality
    double band_inner_offset = -1.0;  // negative: 4 mesh widths
};

struct SteinerAnnulusEntry {
    double eps = 0.0;
    double lhs = 0.0;    // m(Omega_{2eps} \ closure(Omega_eps))
    double rhs = 0.0;    // m(Omega_eps \ closure(Omega)) * (1 - eps H/(N-1))^{N-1}
    double slack = 0.0;  // rhs - lhs
};

struct SteinerReport {
    bool exterior_sphere_ok = false;
    PointId exterior_sphere_failure = 0;  // meaningful when the diagnostic fails
    bool band_ok = false;
    double band_max_violation = 0.0;  // max over the band of (Delta u + H)
    std::size_t band_size = 0;
    bool h_in_stated_range = true;  // H >= 0; otherwise intermediate check only
    std::vector<double> eps;
    std::vector<double> mass;  // m(Omega_eps), nondecreasing
    double minkowski_plus = 0.0;
    std::vector<SteinerAnnulusEntry> annulus;
    bool annulus_ok = false;
    // final expansion m(Omega_eps) <= m(Omega) + (eps - H eps^2/2) m+ + C eps^2
    bool expansion_checked = false;
    bool expansion_ok = false;
    std::vector<double> expansion_residual;  // per eps
    double remainder_coefficient = 0.0;      // fitted C over the larger half
    double remainder_stability = 0.0;        // relative spread of the fit
};

/// Neighborhood-growth experiment: checks the annulus inequality
/// m(Omega_{2eps} \ cl Omega_eps) <= m(Omega_eps \ cl Omega) (1 - eps H/(N-1))^{N-1}
/// for every eps, and (when the diagnostics and the H >= 0 hypothesis hold)
/// the quadratic expansion of m(Omega_eps) with a fitted remainder.
inline SteinerReport steiner_experiment(const DiscreteMMSpace& space, const Region& omega,
                                        const SteinerParams& params) {
    if (!(params.N > 1.0)) throw std::invalid_argument("steiner_experiment: N must be > 1");
    if (params.eps_list.empty())
        throw std::invalid_argument("steiner_experiment: empty eps list");
    SteinerReport report;
    report.eps = params.eps_list;
    report.h_in_stated_range = params.H >= 0.0;
    const double h = space.mesh_size();
    const Region cl_omega = closure(space, omega);
    const std::vector<double> dist = distance_to_region(space, omega);

    // exterior-sphere diagnostic: witness centers are existing nodes within
    // one mesh width of the requested radius whose ball avoids Omega
    const Region bd = boundary(space, omega);
    report.exterior_sphere_ok = true;
    for (PointId x : bd.ids) {
        bool found = false;
        for (PointId p = 0; p < space.size() && !found; ++p) {
            if (omega.contains(p)) continue;
            if (std::abs(space.dist(x, p) - params.exterior_r) > h) continue;
            if (dist[p] >= params.exterior_r - 2.0 * h) found = true;
        }
        if (!found) {
            report.exterior_sphere_ok = false;
            report.exterior_sphere_failure = x;
            break;
        }
    }

    // mean-convexity band: Delta u <= -H + tol away from the first lattice
    // rings, where the point-set distance still looks conical
    const ScalarField u = signed_distance(space, omega);
    const DiscreteLaplacian lap = discrete_laplacian(space, u);
    const double inner =
        params.band_inner_offset >= 0.0 ? params.band_inner_offset : 4.0 * h;
    report.band_max_violation = -std::numeric_limits<double>::infinity();
    for (PointId p = 0; p < space.size(); ++p) {
        if (cl_omega.contains(p)) continue;
        if (!(dist[p] >= inner && dist[p] < params.sigma_band)) continue;
        if (!lap.interior[p]) continue;
        ++report.band_size;
        report.band_max_violation =
            std::max(report.band_max_violation, lap.values[p] + params.H);
    }
    report.band_ok =
        report.band_size > 0 && report.band_max_violation <= params.band_tol;

    // neighborhood masses and the annulus inequality
    auto mass_below = [&](double eps) {
        const double cut = eps * (1.0 + 1e-12);
        double m = 0.0;
        for (PointId p = 0; p < space.size(); ++p)
            if (dist[p] < cut) m += space.mass(p);
        return m;
    };
    const double m_omega = space.mass_of(omega);
    for (double eps : params.eps_list) report.mass.push_back(mass_below(eps));

    report.annulus_ok = true;
    for (double eps : params.eps_list) {
        SteinerAnnulusEntry e;
        e.eps = eps;
        const double cut1 = eps * (1.0 + 1e-12);
        const double cut2 = 2.0 * eps * (1.0 + 1e-12);
        std::vector<PointId> omega_eps_ids;
        for (PointId p = 0; p < space.size(); ++p)
            if (dist[p] < cut1) omega_eps_ids.push_back(p);
        const Region cl_eps =
            closure(space, Region::of(std::move(omega_eps_ids), RegionKind::OpenDomain));
        double lhs = 0.0, inner_mass = 0.0;
        for (PointId p = 0; p < space.size(); ++p) {
            if (dist[p] < cut2 && !cl_eps.contains(p)) lhs += space.mass(p);
            if (dist[p] < cut1 && !cl_omega.contains(p)) inner_mass += space.mass(p);
        }
        e.lhs = lhs;
        const double factor =
            std::pow(1.0 - eps * params.H / (params.N - 1.0), params.N - 1.0);
        e.rhs = inner_mass * factor;
        e.slack = e.rhs - e.lhs;
        if (e.slack < -params.annulus_tol) report.annulus_ok = false;
        report.annulus.push_back(e);
    }

    report.minkowski_plus = minkowski_content(space, omega, params.eps_list).content;

    // final expansion, meaningful only under the stated hypotheses
    if (report.exterior_sphere_ok && report.band_ok && report.h_in_stated_range) {
        report.expansion_checked = true;
        for (std::size_t k = 0; k < params.eps_list.size(); ++k) {
            const double eps = params.eps_list[k];
            const double predicted =
                m_omega + (eps - 0.5 * params.H * eps * eps) * report.minkowski_plus;
            report.expansion_residual.push_back(report.mass[k] - predicted);
        }
        // fit residual ~ C eps^2 on the larger half of the eps grid
        const std::size_t half = std::max<std::size_t>(1, params.eps_list.size() / 2);
        auto fit = [&](std::size_t lo, std::size_t hi) {
            double num = 0.0, den = 0.0;
            for (std::size_t k = lo; k < hi; ++k) {
                const double e2 = params.eps_list[k] * params.eps_list[k];
                num += report.expansion_residual[k] * e2;
                den += e2 * e2;
            }
            return den > 0.0 ? num / den : 0.0;
        };
        report.remainder_coefficient = fit(0, half);
        const std::size_t quarter = std::max<std::size_t>(1, half / 2);
        const double c_a = fit(0, quarter);
        const double c_b = fit(quarter, half);
        report.remainder_stability =
            std::abs(c_a - c_b) / std::max({std::abs(c_a), std::abs(c_b), 1e-300});
        report.expansion_ok = true;
        for (std::size_t k = 0; k < params.eps_list.size(); ++k) {
            const double eps = params.eps_list[k];
            if (report.expansion_residual[k] >
                report.remainder_coefficient * eps * eps + params.annulus_tol) {
                report.expansion_ok = false;
            }
        }
    }
    return report;
}

}  // namespace abplab
