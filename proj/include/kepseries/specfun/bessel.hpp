#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <vector>

#include "kepseries/errors.hpp"
#include "kepseries/specfun/log_value.hpp"
#include "kepseries/specfun/quadrature.hpp"

namespace kepseries {

namespace detail {

inline constexpr int kBesselSeriesCap = 500;

struct SeriesResult {
    double sum;
    double abs_sum;
};

// Ascending series for J_n(x), x >= 0. Terms are generated from a log-domain
// leading term so (x/2)^n / n! cannot overflow on its own.
inline SeriesResult bessel_j_series_raw(int n, double x) {
    if (x == 0.0) return {n == 0 ? 1.0 : 0.0, n == 0 ? 1.0 : 0.0};
    const double h = 0.5 * x;
    const double log_t0 = n * std::log(h) - std::lgamma(n + 1.0);
    double term = std::exp(log_t0);
    if (term == 0.0) return {0.0, 0.0};
    double sum = term;
    double abs_sum = std::abs(term);
    const double h2 = h * h;
    for (int k = 1; k < kBesselSeriesCap; ++k) {
        term *= -h2 / (static_cast<double>(k) * (n + k));
        sum += term;
        abs_sum += std::abs(term);
        // Past the peak (k^2 > h^2) the remaining tail is below |term|.
        if (static_cast<double>(k) * (n + k) > h2 && std::abs(term) <= 1e-18 * std::abs(sum))
            return {sum, abs_sum};
    }
    throw NumericFailure("bessel_j: ascending series exceeded the term cap");
}

// Miller backward recurrence normalized by J_0 + 2 sum J_2k = 1. x > 0.
inline double bessel_j_miller(int n, double x) {
    const double big = std::max<double>(n, x);
    int m = 2 * static_cast<int>((big + 30.0 + 12.0 * std::sqrt(big)) / 2.0);
    double jp1 = 0.0, j = 1e-300, ans = 0.0, norm = 0.0;
    const double two_over_x = 2.0 / x;
    for (int k = m; k > 0; --k) {
        const double jm1 = k * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            ans *= 1e-250;
            norm *= 1e-250;
        }
        // j now holds the unnormalized J_{k-1}.
        if (k - 1 == n) ans = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    }
    norm += j;
    return ans / norm;
}

}  // namespace detail

/// J_n(x) by the ascending series alone; throws NumericFailure past 500 terms.
inline double bessel_j_series(int n, double x) {
    detail::require(n >= 0, "bessel_j: order must be non-negative");
    const double v = detail::bessel_j_series_raw(n, std::abs(x)).sum;
    return (x < 0.0 && n % 2) ? -v : v;
}

/// Bessel function of the first kind J_n(x).
///
/// Uses the ascending series when it converges within the term cap and loses
/// fewer than three digits to cancellation; otherwise Miller's backward
/// recurrence.
inline double bessel_j(int n, double x) {
    detail::require(n >= 0, "bessel_j: order must be non-negative");
    detail::require(std::abs(x) < 1e6, "bessel_j: |x| must be below 1e6");
    const double ax = std::abs(x);
    double v;
    if (ax == 0.0) {
        v = n == 0 ? 1.0 : 0.0;
    } else if (ax < 100.0) {
        const auto r = detail::bessel_j_series_raw(n, ax);
        v = (r.abs_sum <= 1e3 * std::abs(r.sum)) ? r.sum : detail::bessel_j_miller(n, ax);
    } else {
        v = detail::bessel_j_miller(n, ax);
    }
    return (x < 0.0 && n % 2) ? -v : v;
}

/// J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2, with J_{-1} = -J_1.
inline double bessel_j_prime(int n, double x) {
    detail::require(n >= 0, "bessel_j_prime: order must be non-negative");
    if (n == 0) return -bessel_j(1, x);
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

/// Modified Bessel I_p(x) for real p >= 0, x >= 0, in log domain.
inline LogValue bessel_i(double p, double x) {
    detail::require(p >= 0.0, "bessel_i: order must be non-negative");
    detail::require(x >= 0.0, "bessel_i: argument must be non-negative");
    if (x == 0.0) return p == 0.0 ? LogValue{0.0, 1} : LogValue::zero();
    const double lh = std::log(0.5 * x);
    const double h2 = 0.25 * x * x;
    // Sum relative to the first term, rescaling when the running sum grows.
    const double log_t0 = p * lh - std::lgamma(p + 1.0);
    double scale = 0.0;  // sum and term are stored as multiples of exp(scale)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 1000000; ++k) {
        term *= h2 / (static_cast<double>(k) * (p + k));
        sum += term;
        if (sum > 1e280) {
            scale += std::log(sum);
            term /= sum;
            sum = 1.0;
        }
        if (static_cast<double>(k) * (p + k) > h2 && term < 1e-18 * sum)
            return LogValue{log_t0 + scale + std::log(sum), 1};
    }
    throw NumericFailure("bessel_i: series did not converge");
}

/// J_n(x) from its integral definition (1/pi) int_0^pi cos(n t - x sin t) dt,
/// evaluated with a fixed composite Gauss-Legendre rule. Independent check on
/// bessel_j; absolute accuracy only.
inline double bessel_j_integral(int n, double x) {
    detail::require(n >= 0, "bessel_j_integral: order must be non-negative");
    static const GaussLegendreRule rule(32);
    const int panels = 8 + static_cast<int>(std::abs(x) + n) / 2;
    std::vector<double> mesh(panels + 1);
    for (int i = 0; i <= panels; ++i) mesh[i] = std::numbers::pi * i / panels;
    const auto f = [n, x](double t) { return std::cos(n * t - x * std::sin(t)); };
    return integrate_panels(f, mesh, rule) / std::numbers::pi;
}

}  // namespace kepseries
