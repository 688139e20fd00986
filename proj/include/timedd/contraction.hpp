#pragma once

#include "timedd/error.hpp"
#include "timedd/params.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace timedd {

namespace detail {

/// coth(x) - 1 = 2 e^{-2x} / (1 - e^{-2x}) for x > 0, free of cancellation and overflow.
inline double coth_minus_one(double x) noexcept {
    const double q = std::exp(-2.0 * x);
    return 2.0 * q / -std::expm1(-2.0 * x);
}

inline double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvaluationOverflow(std::string(what) + ": non-finite result");
    return v;
}

}  // namespace detail

/// sqrt(kappa^2 d^2 + alpha / nu).
inline double sigma(double d, const ProblemParams& p) noexcept {
    const double kd = p.kappa * d;
    return std::sqrt(kd * kd + p.alpha / p.nu);
}

/// Contraction factor of the AS1 iteration for the tracking system.
///
/// The subtraction sigma*coth(sigma*(T-Gamma)) - kappa*d is split into
/// (sigma - kappa*d) + sigma*(coth - 1), with sigma - kappa*d written as
/// (alpha/nu) / (sigma + kappa*d), so nothing cancels when alpha is small
/// or kappa*d*T is large.
inline double rho_s1_as1(double d, const ProblemParams& p) {
    const double kd = p.kappa * d;
    const double s = sigma(d, p);
    const double s_minus_kd = (p.alpha / p.nu) / (s + kd);
    const double cm_right = detail::coth_minus_one(s * (p.T - p.interface));
    const double cm_left = detail::coth_minus_one(s * p.interface);

    const double num = p.alpha + p.gamma * (s_minus_kd + s * cm_right);
    const double left = s * (1.0 + cm_left) + kd;
    const double right = s * (1.0 + cm_right) + kd + p.gamma / p.nu;
    return detail::checked(num / (p.nu * left * right), "rho_s1_as1");
}

/// Contraction factor of the AS1 iteration for the null-controllability system.
inline double rho_s2_as1(double d, const ProblemParams& p) {
    const double kd = p.kappa * d;
    const double cm_right = detail::coth_minus_one(kd * (p.T - p.interface));
    const double cm_left = detail::coth_minus_one(kd * p.interface);
    return detail::checked(cm_right / (2.0 + cm_left), "rho_s2_as1");
}

/// Factored form of rho_s1_as1 at alpha = 0: rho_s2_as1 times
/// gamma / (nu kappa d coth(kappa d (T-Gamma)) + nu kappa d + gamma).
inline double rho_s1_as1_alpha0(double d, const ProblemParams& p) {
    const double kd = p.kappa * d;
    const double coth_right = 1.0 + detail::coth_minus_one(kd * (p.T - p.interface));
    const double damping = p.gamma / (p.nu * kd * coth_right + p.nu * kd + p.gamma);
    return detail::checked(rho_s2_as1(d, p) * damping, "rho_s1_as1_alpha0");
}

/// Both AS2 iterations pass the same state trace back and forth.
inline double rho_as2(double /*d*/, const ProblemParams& /*p*/) noexcept { return 1.0; }

/// Contraction factor for any (system, variant) pair. The alpha = 0
/// tracking case goes through the factored form.
inline double contraction_factor(System system, Variant variant, double d, const ProblemParams& p) {
    if (variant == Variant::AS2) return rho_as2(d, p);
    if (system == System::S2) return rho_s2_as1(d, p);
    return p.alpha == 0.0 ? rho_s1_as1_alpha0(d, p) : rho_s1_as1(d, p);
}

/// f(a) = ln((1 + e^{2a}) / 2) / (2a), the interface bound as a fraction of T.
inline double f_threshold(double a) {
    if (!(a > 0.0)) throw InvalidConfig("f_threshold: a must be > 0");
    const double log_term = a < 1.0 ? std::log1p(0.5 * std::expm1(2.0 * a))
                                    : 2.0 * a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
    return log_term / (2.0 * a);
}

/// Largest interface for which AS1 on the null-controllability system
/// contracts every mode: Gamma* = T f(kappa d_min T), always in (T/2, T).
inline double gamma_threshold(const ProblemParams& p, double d_min) {
    if (!(d_min > 0.0)) throw InvalidConfig("gamma_threshold: d_min must be > 0");
    return p.T * f_threshold(p.kappa * d_min * p.T);
}

struct MaxContraction {
    double value;
    double argmax;
};

/// max_i |rho(d_i)| over the spectrum and the eigenvalue attaining it.
inline MaxContraction max_contraction(System system, Variant variant, const ProblemParams& p,
                                      std::span<const double> eigenvalues) {
    if (eigenvalues.empty()) throw InvalidConfig("max_contraction: empty spectrum");
    MaxContraction best{-1.0, 0.0};
    for (double d : eigenvalues) {
        if (!(d > 0.0)) throw InvalidConfig("max_contraction: eigenvalues must be > 0");
        const double r = std::abs(contraction_factor(system, variant, d, p));
        if (r > best.value) best = {r, d};
    }
    return best;
}

/// Sampled contraction factor with the settings it came from.
struct ContractionCurve {
    System system;
    Variant variant;
    ProblemParams params;
    std::vector<double> d;
    std::vector<double> rho;
};

inline ContractionCurve contraction_curve(System system, Variant variant, const ProblemParams& p,
                                          std::span<const double> d) {
    ContractionCurve c{system, variant, p, {d.begin(), d.end()}, {}};
    c.rho.reserve(d.size());
    for (double x : d) {
        if (!(x > 0.0)) throw InvalidConfig("contraction_curve: eigenvalues must be > 0");
        c.rho.push_back(contraction_factor(system, variant, x, p));
    }
    return c;
}

/// `count` points spaced logarithmically over [lo, hi], endpoints included.
inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0)
        throw InvalidConfig("log_space: need 0 < lo <= hi and count >= 1");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

}  // namespace timedd
