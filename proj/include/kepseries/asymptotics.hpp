#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "kepseries/errors.hpp"
#include "kepseries/fourier.hpp"
#include "kepseries/specfun/gamma.hpp"
#include "kepseries/specfun/log_value.hpp"
#include "kepseries/specfun/roots.hpp"

namespace kepseries {

enum class AsymptoticVariant { jacobi_P, jacobi_Q, carlini_erroneous_P_ratio, carlini_Pprime };

inline std::string_view to_string(AsymptoticVariant v) {
    switch (v) {
        case AsymptoticVariant::jacobi_P: return "jacobi_P";
        case AsymptoticVariant::jacobi_Q: return "jacobi_Q";
        case AsymptoticVariant::carlini_erroneous_P_ratio: return "carlini_erroneous_P_ratio";
        case AsymptoticVariant::carlini_Pprime: return "carlini_Pprime";
    }
    return "?";
}

struct AsymptoticEstimate {
    LogValue value;
    int p = 0;
    double c = 0.0;
    AsymptoticVariant variant = AsymptoticVariant::jacobi_P;

    double as_double() const { return value.value(); }
};

namespace detail {

inline void require_asym_args(double c, int p) {
    require(c >= 0.0 && c < 1.0, "eccentricity must lie in [0, 1)");
    require(p >= 1, "index p must be >= 1");
}

/// log(alpha e^f) with f = sqrt(1 - c^2), alpha = c / (1 + f).
inline double log_corrected_base(double c) {
    const double f = std::sqrt(1.0 - c * c);
    return std::log(c / (1.0 + f)) + f;
}

}  // namespace detail

/// P_p ~ (1/p) (alpha e^f)^p (1 + 4 / (3 sqrt(2 p pi) f^3)).
inline AsymptoticEstimate jacobi_P_asym(double c, int p) {
    detail::require_asym_args(c, p);
    AsymptoticEstimate est{LogValue::zero(), p, c, AsymptoticVariant::jacobi_P};
    if (c == 0.0) return est;
    const double f = std::sqrt(1.0 - c * c);
    const double corr = 1.0 + 4.0 / (3.0 * std::sqrt(2.0 * p * std::numbers::pi) * f * f * f);
    est.value = LogValue::from_log(-std::log(p) + p * detail::log_corrected_base(c) + std::log(corr), +1);
    return est;
}

/// Q_p ~ -2 (1 - c^2)^{1/4} / (p sqrt(p) sqrt(2 pi)) (alpha e^f)^p.
inline AsymptoticEstimate jacobi_Q_asym(double c, int p) {
    detail::require_asym_args(c, p);
    AsymptoticEstimate est{LogValue::zero(), p, c, AsymptoticVariant::jacobi_Q};
    if (c == 0.0) return est;
    const double log_mag = std::log(2.0) + 0.25 * std::log1p(-c * c) - 1.5 * std::log(p) -
                           0.5 * std::log(2.0 * std::numbers::pi) + p * detail::log_corrected_base(c);
    est.value = LogValue::from_log(log_mag, -1);
    return est;
}

/// The historical ratio c e^g / (1 + g) with g = sqrt(1 + c^2).
inline double carlini_erroneous_ratio(double c) {
    detail::require(c > 0.0 && c < 1.0, "carlini_erroneous_ratio: c must lie in (0, 1)");
    const double g = std::sqrt(1.0 + c * c);
    return c * std::exp(g) / (1.0 + g);
}

inline constexpr Bracket kLimitBracket{0.3, 0.95};

/// Root of c e^{sqrt(1+c^2)} / (1 + sqrt(1+c^2)) = 1, about 0.66274.
inline double carlini_laplace_constant(double tol = 1e-12) {
    detail::require(tol > 0.0, "carlini_laplace_constant: tol must be positive");
    return find_root([](double c) { return carlini_erroneous_ratio(c) - 1.0; }, kLimitBracket, tol);
}

/// Root of ln c + sqrt(1 + c^2) = ln 2, about 0.6176.
inline double carlini_radius_threshold(double tol = 1e-12) {
    detail::require(tol > 0.0, "carlini_radius_threshold: tol must be positive");
    return find_root([](double c) { return std::log(c) + std::sqrt(1.0 + c * c) - std::log(2.0); }, kLimitBracket,
                     tol);
}

/// 1 - alpha e^f; positive for every c in [0, 1).
inline double corrected_convergence_margin(double c) {
    detail::require(c >= 0.0 && c < 1.0, "corrected_convergence_margin: c must lie in [0, 1)");
    if (c == 0.0) return 1.0;
    return -std::expm1(detail::log_corrected_base(c));
}

/// P' = (2 alpha^p / p) e^{pf} P(p + 1, p f), P the regularized lower
/// incomplete gamma function.
inline AsymptoticEstimate carlini_Pprime(double c, int p) {
    detail::require_asym_args(c, p);
    AsymptoticEstimate est{LogValue::zero(), p, c, AsymptoticVariant::carlini_Pprime};
    if (c == 0.0) return est;
    const double f = std::sqrt(1.0 - c * c);
    const double alpha = c / (1.0 + f);
    const double log_mag = std::log(2.0) + p * std::log(alpha) - std::log(p) + p * f +
                           log_reg_inc_gamma_lower(p + 1.0, p * f);
    est.value = LogValue::from_log(log_mag, +1);
    return est;
}

struct AsymptoticSweepRow {
    int p;
    double exact;
    double asymptotic;
    double relative_error;
};

/// Compares jacobi_P_asym (true_anomaly_sine) or jacobi_Q_asym
/// (radius_mean_cosine) with quadrature values at each index.
inline std::vector<AsymptoticSweepRow> asymptotic_sweep(Family family, double c, const std::vector<int>& ps) {
    detail::require(family == Family::true_anomaly_sine || family == Family::radius_mean_cosine,
                    "asymptotic_sweep: family must be true_anomaly_sine or radius_mean_cosine");
    std::vector<AsymptoticSweepRow> rows;
    for (int p : ps) {
        const double exact = fourier_quadrature(family, c, p);
        const double asym =
            (family == Family::true_anomaly_sine ? jacobi_P_asym(c, p) : jacobi_Q_asym(c, p)).as_double();
        rows.push_back({p, exact, asym, exact == 0.0 ? std::abs(asym) : std::abs(asym / exact - 1.0)});
    }
    return rows;
}

}  // namespace kepseries
