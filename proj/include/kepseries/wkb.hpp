#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "kepseries/errors.hpp"
#include "kepseries/specfun/log_value.hpp"
#include "kepseries/specfun/ode.hpp"
#include "kepseries/specfun/quadrature.hpp"

namespace kepseries {

/// s'' + ((2p + 1)/x) s' = (p^2/sigma^2) s with s(0) = 1, s'(0) = 0, on (0, x_max].
struct WkbProblem {
    double p = 1.0;
    double sigma = 1.0;
    double x_max = 1.0;

    void validate() const {
        detail::require(p >= 1.0, "WkbProblem: p must be >= 1");
        detail::require(sigma > 0.0 && std::isfinite(sigma), "WkbProblem: sigma must be positive");
        detail::require(x_max > 0.0 && std::isfinite(x_max), "WkbProblem: x_max must be positive and finite");
    }
};

/// Y and its two corrections; y = Y + Y'/p + Y''/p^2.
struct WkbTerms {
    double Y;
    double Y1;
    double Y2;
};

inline constexpr double kWkbSeriesHandoff = 1e-3;

namespace detail {

struct SeriesWithSlope {
    LogValue s;
    double slope_ratio;  // s'(x) / s(x)
};

/// Sum_m t_m with t_m = z^{2m} / (m! (p+1)_m), z = p x / (2 sigma), and the
/// matching sum of t_m' = (2m/x) t_m. Terms are accumulated relative to a
/// running log scale.
inline SeriesWithSlope s_series(const WkbProblem& pr, double x, int terms) {
    detail::require(terms >= 1, "series_s: terms must be >= 1");
    detail::require(x >= 0.0, "series_s: x must be non-negative");
    if (x == 0.0) return {LogValue::from_log(0.0), 0.0};
    const double z2 = std::pow(pr.p * x / (2.0 * pr.sigma), 2);
    double log_scale = 0.0;  // log of the current reference term
    double sum = 1.0, dsum = 0.0, log_t = 0.0;
    for (int m = 1; m < terms; ++m) {
        log_t += std::log(z2 / (m * (pr.p + m)));
        if (log_t > log_scale + 300.0) {
            const double shrink = std::exp(log_scale - log_t);
            sum *= shrink;
            dsum *= shrink;
            log_scale = log_t;
        }
        const double t = std::exp(log_t - log_scale);
        sum += t;
        dsum += 2.0 * m * t;
        if (m * (pr.p + m) > z2 && t < 1e-17 * sum) return {LogValue::from_log(log_scale + std::log(sum)), dsum / (x * sum)};
    }
    throw NumericFailure("series_s: term cap reached before convergence");
}

inline void require_positive_x(double x) { require(x > 0.0 && std::isfinite(x), "x must be positive and finite"); }

}  // namespace detail

/// Ascending series for s(x); all terms positive for real sigma.
inline LogValue series_s(const WkbProblem& pr, double x, int terms = 100000) {
    pr.validate();
    return detail::s_series(pr, x, terms).s;
}

/// Direct integration of the ODE for (log s, s'/s); the series supplies the
/// state at the handoff point x = 1e-3.
inline LogValue ode_oracle(const WkbProblem& pr, double x) {
    pr.validate();
    detail::require(x >= 0.0 && x <= pr.x_max, "ode_oracle: x must lie in [0, x_max]");
    if (x <= kWkbSeriesHandoff) return series_s(pr, x);
    const auto start = detail::s_series(pr, kWkbSeriesHandoff, 100000);
    const double k2 = pr.p * pr.p / (pr.sigma * pr.sigma);
    const double a = 2.0 * pr.p + 1.0;
    const auto rhs = [&](double t, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], k2 - a / t * y[1] - y[1] * y[1]};
    };
    OdeTolerance tol;
    tol.rtol = 1e-13;
    tol.atol = 1e-14;
    const auto end = integrate_dopri<2>(rhs, kWkbSeriesHandoff, {start.s.log_magnitude, start.slope_ratio}, x, tol);
    return LogValue::from_log(end[0]);
}

/// Y, Y', Y'' at x > 0. Y = (2/x)(g - 1) with g = sqrt(1 + x^2/sigma^2);
/// the corrections come from
///   (Y + 2/x) Y'  = -dY/dx - Y/x
///   (Y + 2/x) Y'' = -dY'/dx - Y'^2/2 - Y'/x
/// with every derivative taken analytically.
inline WkbTerms wkb_terms(const WkbProblem& pr, double x) {
    pr.validate();
    detail::require_positive_x(x);
    const double s2 = pr.sigma * pr.sigma, s4 = s2 * s2, s6 = s4 * s2;
    const double g = std::sqrt(1.0 + x * x / s2);
    const double gp1 = g + 1.0;
    // Forms free of the cancellation in g - 1.
    const double Y = 2.0 * x / (s2 * gp1);
    const double Yx = 2.0 / (s2 * gp1) - 2.0 * x * x / (s4 * g * gp1 * gp1);
    const double Yxx = -6.0 * x / (s4 * g * gp1 * gp1) + 2.0 * x * x * x * (3.0 * g + 1.0) / (s6 * g * g * g * gp1 * gp1 * gp1);

    const double N = -Yx - Y / x;
    const double Nx = -Yxx + 2.0 * x / (s4 * g * gp1 * gp1);
    const double D = x * Y + 2.0;
    const double Dx = Y + x * Yx;
    const double Y1 = x * N / D;
    const double Y1x = ((N + x * Nx) * D - x * N * Dx) / (D * D);
    const double Y2 = (-x * Y1x - 0.5 * x * Y1 * Y1 - Y1) / D;
    return {Y, Y1, Y2};
}

/// Integral of y from 0 to x, truncated after the given order (0, 1 or 2):
/// 2(g - 1) - 2 ln((g+1)/2) - (1/p) ln g + (1/p^2)(1/6 + 1/(4g) - 5/(12 g^3)).
inline double wkb_exponent_integral(const WkbProblem& pr, double x, int order = 2) {
    pr.validate();
    detail::require_positive_x(x);
    detail::require(order >= 0 && order <= 2, "wkb_exponent_integral: order must be 0, 1 or 2");
    const double q = x * x / (pr.sigma * pr.sigma);
    const double g = std::sqrt(1.0 + q);
    const double gm1 = q / (g + 1.0);
    double value = 2.0 * gm1 - 2.0 * std::log1p(0.5 * gm1);
    if (order >= 1) value -= 0.5 * std::log1p(q) / pr.p;
    if (order >= 2) value += (1.0 / 6.0 + 1.0 / (4.0 * g) - 5.0 / (12.0 * g * g * g)) / (pr.p * pr.p);
    return value;
}

/// exp((p/2) * integral of y).
inline LogValue wkb_approx(const WkbProblem& pr, double x, int order = 2) {
    return LogValue::from_log(0.5 * pr.p * wkb_exponent_integral(pr, x, order));
}

/// The expansion as one object: g, the three terms, their truncated sum y,
/// and the assembled approximation.
class WkbExpansion {
public:
    WkbExpansion(WkbProblem problem, int order) : problem_(problem), order_(order) {
        problem_.validate();
        detail::require(order >= 0 && order <= 2, "WkbExpansion: order must be 0, 1 or 2");
    }

    const WkbProblem& problem() const { return problem_; }
    int order() const { return order_; }

    double g(double x) const { return std::sqrt(1.0 + x * x / (problem_.sigma * problem_.sigma)); }
    WkbTerms terms(double x) const { return wkb_terms(problem_, x); }

    double y(double x) const {
        const auto t = terms(x);
        double v = t.Y;
        if (order_ >= 1) v += t.Y1 / problem_.p;
        if (order_ >= 2) v += t.Y2 / (problem_.p * problem_.p);
        return v;
    }

    double exponent_integral(double x) const { return wkb_exponent_integral(problem_, x, order_); }
    LogValue approx(double x) const { return wkb_approx(problem_, x, order_); }

private:
    WkbProblem problem_;
    int order_;
};

/// s = C int_0^T (T^2 - t^2)^{p - 1/2} cos(p x t) dt with T = c / sqrt(1 - c^2)
/// and C = (2.4...2p)/(1.3...(2p-1)) (2/pi) T^{-2p}, so that s(0) = 1.
/// Evaluated after t = T sin(phi) as
///   (2p)!!/(2p-1)!! (2/pi) int_0^{pi/2} cos^{2p}(phi) cos(p x T sin phi) dphi.
inline LogValue euler_integral_rep(double c, int p, double x) {
    detail::require(c > 0.0 && c < 1.0, "euler_integral_rep: c must lie in (0, 1)");
    detail::require(p >= 1, "euler_integral_rep: p must be >= 1");
    detail::require(std::isfinite(x), "euler_integral_rep: x must be finite");
    const double T = c / std::sqrt(1.0 - c * c);
    const double k = p * x * T;
    const double log_prefactor =
        p * std::log(4.0) + 2.0 * std::lgamma(p + 1.0) - std::lgamma(2.0 * p + 1.0) + std::log(2.0 / std::numbers::pi);
    // The Wallis integral sets the magnitude of the result at x = 0.
    const double wallis = std::exp(-log_prefactor);
    QuadratureSpec spec;
    spec.abs_tol = 1e-15 * wallis;
    spec.initial_panels = std::max(4, static_cast<int>(std::ceil(std::abs(k) / 4.0)));
    const double integral = integrate(
        [&](double phi) { return std::pow(std::cos(phi), 2 * p) * std::cos(k * std::sin(phi)); }, 0.0,
        0.5 * std::numbers::pi, spec);
    return LogValue::from_log(log_prefactor) * LogValue::from_double(integral);
}

struct WkbSweepRow {
    double p;
    double x;
    LogValue series;
    LogValue ode;
    LogValue wkb;
    double rel_error;  // |wkb / series - 1|
};

/// Evaluates the three representations at x = x_max for p, 2p, ..., count*p.
inline std::vector<WkbSweepRow> wkb_sweep(const WkbProblem& base, int count) {
    base.validate();
    detail::require(count >= 1, "wkb_sweep: count must be >= 1");
    std::vector<WkbSweepRow> rows;
    for (int k = 1; k <= count; ++k) {
        WkbProblem pr = base;
        pr.p = base.p * k;
        const double x = pr.x_max;
        const LogValue s = series_s(pr, x);
        const LogValue w = wkb_approx(pr, x);
        rows.push_back({pr.p, x, s, ode_oracle(pr, x), w, std::abs(std::expm1(w.log_magnitude - s.log_magnitude))});
    }
    return rows;
}

}  // namespace kepseries
