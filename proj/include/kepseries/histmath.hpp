#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "kepseries/errors.hpp"
#include "kepseries/specfun/quadrature.hpp"
#include "kepseries/specfun/roots.hpp"

namespace kepseries {

/// Principal real root of x ln x = z for |z| < 1/e by the inversion series
/// x = 1 + sum_{n>=1} (-1)^{n-1} (n-1)^{n-1} z^n / n!, terms taken in log form.
inline double xx_series(double z, int terms = 100000) {
    detail::require(std::isfinite(z), "xx_series: z must be finite");
    if (std::abs(z) >= std::exp(-1.0)) throw OutOfRadiusError("xx_series: |z| must be below 1/e");
    detail::require(terms >= 1, "xx_series: terms must be >= 1");
    if (z == 0.0) return 1.0;
    const double ratio = std::numbers::e * std::abs(z);
    const double log_abs_z = std::log(std::abs(z));
    double sum = 1.0;
    for (int n = 1; n <= terms; ++n) {
        const double log_t = (n > 1 ? (n - 1) * std::log(n - 1.0) : 0.0) + n * log_abs_z - std::lgamma(n + 1.0);
        const int sign = ((n - 1) % 2 == 0 ? 1 : -1) * (z < 0.0 && n % 2 == 1 ? -1 : 1);
        const double t = sign * std::exp(log_t);
        sum += t;
        // Remaining terms shrink at least geometrically with ratio e|z|.
        if (std::abs(t) * ratio / (1.0 - ratio) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

enum class XxBranch { upper, lower };

/// Real root of x^x = y: x ln x = ln y. The upper branch has x >= 1/e; the
/// lower branch (0 < x < 1/e) exists for ln y in (-1/e, 0).
inline double xx_newton(double y, XxBranch branch) {
    detail::require(y > 0.0 && std::isfinite(y), "xx_newton: y must be positive and finite");
    const double z = std::log(y);
    const double inv_e = std::exp(-1.0);
    if (z < -inv_e) throw NoRealRootError("xx_newton: ln y < -1/e has no real root; use xx_complex_roots");
    if (z == -inv_e) return inv_e;
    const auto f = [z](double x) { return x == 0.0 ? -z : x * std::log(x) - z; };
    const auto df = [](double x) { return std::log(x) + 1.0; };
    if (branch == XxBranch::upper) return find_root(f, df, Bracket{inv_e, 1.0 + std::max(1.0, z)}, 1e-15);
    if (z >= 0.0) throw NoRealRootError("xx_newton: lower branch needs ln y in (-1/e, 0)");
    return find_root(f, Bracket{0.0, inv_e}, 1e-16);
}

/// One nonreal solution of x ln x = z. `branch_index` counts conjugate pairs
/// from 1; `window` is the Lambert branch k with ln x = W_k(z). For z < 0 the
/// upper root of window j has alpha in (2j pi, (2j+1) pi) and k = j; its
/// conjugate sits on k = -j - 1 because W is continuous from above the cut.
struct BranchRoot {
    std::complex<double> x;
    double alpha = 0.0;
    int branch_index = 0;
    int window = 0;
    double residual = 0.0;
};

namespace detail {

/// ln(alpha / sin alpha) - alpha cot alpha.
inline double alpha_equation_lhs(double a) { return std::log(a / std::sin(a)) - a * std::cos(a) / std::sin(a); }

}  // namespace detail

/// Solves ln(-z) = ln(alpha / sin alpha) - alpha cot alpha in window j and
/// assembles x = -(z sin alpha / alpha) e^{i alpha}.
inline BranchRoot xx_branch_root(double z, int window) {
    detail::require(z < 0.0 && std::isfinite(z), "xx_branch_root: z must be negative");
    detail::require(window >= 0, "xx_branch_root: window must be >= 0");
    constexpr double pi = std::numbers::pi;
    const double target = std::log(-z);
    const auto h = [target](double a) { return detail::alpha_equation_lhs(a) - target; };
    const double lo = 2.0 * window * pi, hi = lo + pi;
    const double eps = 1e-9;
    const double left = window == 0 ? -1.0 - target : h(lo + eps);
    if (!(left < 0.0 && h(hi - eps) > 0.0))
        throw BranchNotFoundError("xx_branch_root: no root in window " + std::to_string(window));
    const double alpha = find_root(h, Bracket{window == 0 ? 1e-6 * pi : lo + eps, hi - eps}, 1e-15);
    const double rho = -z * std::sin(alpha) / alpha;
    BranchRoot r;
    r.x = std::polar(rho, alpha);
    r.alpha = alpha;
    r.window = window;
    r.residual = std::abs(r.x * std::complex<double>(std::log(rho), alpha) - z);
    return r;
}

/// The first k_max conjugate pairs of nonreal roots of x ln x = z, z < 0,
/// as [x_1, conj x_1, x_2, conj x_2, ...]. Window 0 holds a pair only for
/// z < -1/e; for -1/e < z < 0 the pairs coexist with the two real roots.
inline std::vector<BranchRoot> xx_complex_roots(double z, int k_max) {
    detail::require(z < 0.0 && std::isfinite(z), "xx_complex_roots: z must be negative");
    detail::require(k_max >= 1, "xx_complex_roots: k_max must be >= 1");
    std::vector<BranchRoot> out;
    int window = z < -std::exp(-1.0) ? 0 : 1;
    for (int k = 1; k <= k_max; ++k, ++window) {
        BranchRoot r = xx_branch_root(z, window);
        if (!(r.residual < 1e-10)) throw NumericFailure("xx_complex_roots: residual above 1e-10");
        r.branch_index = k;
        BranchRoot c = r;
        c.x = std::conj(r.x);
        c.alpha = -r.alpha;
        c.window = -r.window - 1;
        out.push_back(r);
        out.push_back(c);
    }
    return out;
}

/// Branch k of the Lambert W function by Halley iteration on w e^w = z.
inline std::complex<double> lambert_w(std::complex<double> z, int k) {
    using cd = std::complex<double>;
    detail::require(std::isfinite(z.real()) && std::isfinite(z.imag()), "lambert_w: z must be finite");
    if (z == 0.0) {
        if (k == 0) return 0.0;
        throw DomainError("lambert_w: only branch 0 is finite at z = 0");
    }
    const double e = std::numbers::e;
    cd w;
    const cd near_branch = 1.0 + e * z;
    const bool principal_small = k == 0 && std::abs(z) < 3.0;
    if ((std::abs(near_branch) < 0.3 || (principal_small && (std::abs(1.0 + z) < 0.5 || std::abs(near_branch) < 1.5))) &&
        (k == 0 || (k == -1 && z.imag() >= 0.0) || (k == 1 && z.imag() < 0.0))) {
        cd p = std::sqrt(2.0 * near_branch);
        if (k != 0) p = -p;
        w = -1.0 + p - p * p / 3.0;
    } else {
        const cd l1 = std::log(z) + cd(0.0, 2.0 * std::numbers::pi * k);
        w = principal_small ? std::log(1.0 + z) : l1 - std::log(l1);
    }
    int polish = 0;
    for (int it = 0; it < 100; ++it) {
        const cd ew = std::exp(w);
        const cd f = w * ew - z;
        const cd step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(w))) return w;
        if (std::abs(step) <= 1e-8 * std::max(1.0, std::abs(w)) && ++polish > 2) return w;
    }
    throw ConvergenceError("lambert_w: Halley iteration did not converge");
}

/// e^{W_k(z)}, a root of x ln x = z on the logarithm branch ln x = W_k(z).
inline std::complex<double> xx_root_via_lambert(double z, int k) { return std::exp(lambert_w(z, k)); }

/// Nonreal roots from Lambert branches k = 1..k_max and their conjugates, for
/// any real z != 0; alpha is Im W_k(z).
inline std::vector<BranchRoot> xx_lambert_roots(double z, int k_max) {
    detail::require(z != 0.0 && std::isfinite(z), "xx_lambert_roots: z must be nonzero and finite");
    detail::require(k_max >= 1, "xx_lambert_roots: k_max must be >= 1");
    std::vector<BranchRoot> out;
    for (int k = 1; k <= k_max; ++k) {
        const auto w = lambert_w(z, k);
        BranchRoot r;
        r.x = std::exp(w);
        r.alpha = w.imag();
        r.branch_index = k;
        r.window = k;
        r.residual = std::abs(r.x * w - z);
        BranchRoot c = r;
        c.x = std::conj(r.x);
        c.alpha = -r.alpha;
        c.window = z < 0.0 ? -k - 1 : -k;
        out.push_back(r);
        out.push_back(c);
    }
    return out;
}

struct DivergentSumReport {
    double integral;             // int_0^inf e^{-u} / (1 + u) du
    double integral_direct;      // int_0^1 e^{1 - 1/t} / t dt
    double best_partial_sum;     // sum_{n<=n_stop} (-1)^n n!
    double previous_partial_sum; // the partial sum one term earlier
    double first_omitted_term;   // (-1)^{n_stop+1} (n_stop+1)!
    int n_stop;
};

/// Euler's value for 1 - 1! + 2! - 3! + ..., by two quadratures, with the
/// partial sum truncated before the terms start to grow.
inline DivergentSumReport euler_divergent_sum_report() {
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.initial_panels = 8;
    // e^{-50} / 51 bounds the dropped tail far below double precision of the sum.
    const double integral = integrate([](double u) { return std::exp(-u) / (1.0 + u); }, 0.0, 50.0, spec);
    const double direct = integrate([](double t) { return t == 0.0 ? 0.0 : std::exp(1.0 - 1.0 / t) / t; }, 0.0, 1.0, spec);

    DivergentSumReport rep{integral, direct, 1.0, 0.0, 0.0, 0};
    double term = 1.0, sum = 1.0;
    for (int n = 1;; ++n) {
        const double next = -term * n;
        if (std::abs(next) > std::abs(term)) {
            rep.first_omitted_term = next;
            break;
        }
        rep.previous_partial_sum = sum;
        sum += next;
        term = next;
        rep.n_stop = n;
    }
    rep.best_partial_sum = sum;
    return rep;
}

inline double euler_divergent_sum() { return euler_divergent_sum_report().integral; }

/// f(x) = x - 1/x and phi(x) = x + 1/x; phi^2 - f^2 = 4 and
/// f(x^3) = f(x)^3 + 3 f(x).
inline double conj_f(double x) { return x - 1.0 / x; }
inline double conj_phi(double x) { return x + 1.0 / x; }

/// The x > 0 with f(x) = m.
inline double conj_f_inverse(double m) {
    const double r = std::sqrt(m * m + 4.0);
    return m >= 0.0 ? 0.5 * (m + r) : 2.0 / (r - m);
}

/// Roots of p^2 - a p = b (b > 0) through p = x sqrt(b), f(x) = a / sqrt(b).
inline std::vector<double> conj_solve_quadratic(double a, double b) {
    detail::require(b > 0.0 && std::isfinite(a) && std::isfinite(b), "conj_solve_quadratic: need b > 0");
    const double sb = std::sqrt(b);
    const double x = conj_f_inverse(a / sb);
    return {x * sb, -sb / x};
}

/// Real root of p^3 + a p = b (a > 0): with p = q sqrt(a/3), q^3 + 3q = f(x^3)
/// for f(x^3) = (3/a)^{3/2} b, and q = f(x).
inline double conj_solve_cubic(double a, double b) {
    detail::require(a > 0.0 && std::isfinite(a) && std::isfinite(b), "conj_solve_cubic: need a > 0");
    if (b < 0.0) return -conj_solve_cubic(a, -b);
    const double m = std::pow(3.0 / a, 1.5) * b;
    const double x = std::cbrt(conj_f_inverse(m));
    return conj_f(x) * std::sqrt(a / 3.0);
}

/// Positive root of x^2 + x - 1.
inline double golden_ratio_root() { return 0.5 * (std::sqrt(5.0) - 1.0); }

inline constexpr int kFibonacciMaxIndex = 90;

/// 1, 2, 3, 5, 8, ... (index 0 is 1, index 1 is 2).
inline std::int64_t fibonacci(int n) {
    detail::require(n >= 0, "fibonacci: n must be >= 0");
    if (n > kFibonacciMaxIndex) throw OverflowError("fibonacci: n above 90 overflows 64-bit integers");
    std::int64_t a = 1, b = 2;
    for (int i = 0; i < n; ++i) {
        const std::int64_t next = a + b;
        a = b;
        b = next;
    }
    return a;
}

}  // namespace kepseries
