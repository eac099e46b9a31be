#pragma once

// Comparison coefficients for curvature-dimension bounds: the model-space
// solutions s_kappa, c_kappa of u'' + kappa u = 0, the distortion
// coefficients sigma/tau built from them, and the assembled contact-set
// volume bound with its K<0 / K=0 / K>0 branches.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace abplab {

inline constexpr double kPi = 3.14159265358979323846;

/// Extended real used for coefficients that may blow up (K theta^2 past the
/// model-space diameter). Downstream inequality checks treat an infinite
/// bound as trivially satisfied.
struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal of(double v) { return {v, false}; }
    static ExtendedReal inf() { return {std::numeric_limits<double>::infinity(), true}; }

    bool finite() const { return !infinite; }
};

namespace detail {

// 4-term Taylor expansions used when |kappa| theta^2 is tiny; the direct
// trig/hyperbolic branches lose nothing there but the kappa -> 0 crossing
// stays exactly continuous this way.
inline double s_kappa_taylor(double kappa, double theta) {
    const double x2 = kappa * theta * theta;
    return theta * (1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0);
}

inline double c_kappa_taylor(double kappa, double theta) {
    const double x2 = kappa * theta * theta;
    return 1.0 - x2 / 2.0 + x2 * x2 / 24.0 - x2 * x2 * x2 / 720.0;
}

inline constexpr double kTinyKappaTheta2 = 1e-10;

inline void check_skappa_domain(double kappa, double theta) {
    if (theta < 0.0) {
        throw std::invalid_argument("s_kappa: theta must be nonnegative, got " +
                                    std::to_string(theta));
    }
    if (kappa > 0.0 && theta >= kPi / std::sqrt(kappa)) {
        throw std::domain_error("s_kappa: theta=" + std::to_string(theta) +
                                " outside [0, pi/sqrt(kappa)) for kappa=" +
                                std::to_string(kappa));
    }
}

}  // namespace detail

/// s_kappa(theta): sin-type solution, s(0)=0, s'(0)=1.
inline double s_kappa(double kappa, double theta) {
    detail::check_skappa_domain(kappa, theta);
    if (std::abs(kappa) * theta * theta < detail::kTinyKappaTheta2) {
        return detail::s_kappa_taylor(kappa, theta);
    }
    if (kappa > 0.0) {
        const double r = std::sqrt(kappa);
        return std::sin(r * theta) / r;
    }
    const double r = std::sqrt(-kappa);
    return std::sinh(r * theta) / r;
}

/// c_kappa(theta): cos-type solution, c(0)=1, c'(0)=0; c_kappa = s_kappa'.
inline double c_kappa(double kappa, double theta) {
    detail::check_skappa_domain(kappa, theta);
    if (std::abs(kappa) * theta * theta < detail::kTinyKappaTheta2) {
        return detail::c_kappa_taylor(kappa, theta);
    }
    if (kappa > 0.0) {
        return std::cos(std::sqrt(kappa) * theta);
    }
    return std::cosh(std::sqrt(-kappa) * theta);
}

/// s_kappa(theta)/theta with the analytic limit 1 at theta = 0.
inline double s_kappa_over_theta(double kappa, double theta) {
    detail::check_skappa_domain(kappa, theta);
    if (std::abs(kappa) * theta * theta < detail::kTinyKappaTheta2) {
        const double x2 = kappa * theta * theta;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
    }
    return s_kappa(kappa, theta) / theta;
}

struct DistortionParams {
    double K = 0.0;    // curvature bound
    double N = 2.0;    // dimension bound, > 1
    double t = 0.0;    // interpolation fraction in [0,1]
    double theta = 0;  // distance argument, >= 0

    void validate() const {
        if (!(N > 1.0)) throw std::invalid_argument("DistortionParams: N must be > 1");
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("DistortionParams: t must lie in [0,1]");
        if (!(theta >= 0.0))
            throw std::invalid_argument("DistortionParams: theta must be >= 0");
    }
};

/// sigma_{K,N}^{(t)}(theta). Infinite once K theta^2 >= N pi^2, t when
/// K theta^2 = 0, otherwise s_{K/N}(t theta) / s_{K/N}(theta).
inline ExtendedReal sigma(double K, double N, double t, double theta) {
    if (!(N > 0.0)) throw std::invalid_argument("sigma: N must be positive");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("sigma: t must lie in [0,1]");
    if (!(theta >= 0.0)) throw std::invalid_argument("sigma: theta must be >= 0");
    if (K * theta * theta >= N * kPi * kPi) return ExtendedReal::inf();
    if (K == 0.0 || theta == 0.0) return ExtendedReal::of(t);
    const double kappa = K / N;
    return ExtendedReal::of(s_kappa(kappa, t * theta) / s_kappa(kappa, theta));
}

inline ExtendedReal sigma(const DistortionParams& p) {
    p.validate();
    return sigma(p.K, p.N, p.t, p.theta);
}

/// tau_{K,N}^{(t)}(theta) = t^{1/N} sigma_{K,N-1}^{(t)}(theta)^{(N-1)/N}.
/// An infinite sigma propagates.
inline ExtendedReal tau(double K, double N, double t, double theta) {
    if (!(N > 1.0)) throw std::invalid_argument("tau: N must be > 1");
    const ExtendedReal s = sigma(K, N - 1.0, t, theta);
    if (s.infinite) return ExtendedReal::inf();
    return ExtendedReal::of(std::pow(t, 1.0 / N) * std::pow(s.value, (N - 1.0) / N));
}

inline ExtendedReal tau(const DistortionParams& p) {
    p.validate();
    return tau(p.K, p.N, p.t, p.theta);
}

/// Assembled contact-set bound constant. The degenerate Theta=0 / Phi=0
/// cases use lim_{x->0} s(x)/x = 1, joining the K=0 branch continuously.
struct AbpCoefficient {
    double value = 1.0;      // branch constant, already raised to the N-th power
    double exp_bound = 0.0;  // exp(t L), meaningful only when has_exp_bound
    bool has_exp_bound = false;
};

inline AbpCoefficient abp_coefficient(double K, double N, double t, double L,
                                      double Theta, double Phi) {
    if (!(N > 1.0)) throw std::invalid_argument("abp_coefficient: N must be > 1");
    if (!(L >= 0.0)) throw std::invalid_argument("abp_coefficient: L must be >= 0");
    if (!(t >= 0.0)) throw std::invalid_argument("abp_coefficient: t must be >= 0");
    if (!(Theta >= Phi && Phi >= 0.0))
        throw std::invalid_argument("abp_coefficient: need Theta >= Phi >= 0");

    AbpCoefficient out;
    if (K == 0.0) {
        out.value = std::pow(1.0 + t * L / N, N);
        out.exp_bound = std::exp(t * L);
        out.has_exp_bound = true;
        return out;
    }
    const double kappa = K / N;
    const double x = (K < 0.0) ? Theta : Phi;
    const double base = c_kappa(kappa, x) + t * s_kappa_over_theta(kappa, x) / N * L;
    out.value = std::pow(base, N);
    return out;
}

}  // namespace abplab
