#pragma once

#include <cmath>
#include <limits>

#include "kepseries/errors.hpp"

namespace kepseries {

namespace detail {

// Series for P(s, x), valid for x < s + 1.
inline double inc_gamma_series(double s, double x) {
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17)
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw NumericFailure("reg_inc_gamma_lower: series did not converge");
}

// Lentz continued fraction for Q(s, x), valid for x >= s + 1.
inline double inc_gamma_cf(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
    }
    throw NumericFailure("reg_inc_gamma_lower: continued fraction did not converge");
}

}  // namespace detail

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
inline double reg_inc_gamma_lower(double s, double x) {
    detail::require(s > 0.0, "reg_inc_gamma_lower: s must be positive");
    detail::require(x >= 0.0, "reg_inc_gamma_lower: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 1.0) return std::min(1.0, detail::inc_gamma_series(s, x));
    return std::max(0.0, 1.0 - detail::inc_gamma_cf(s, x));
}

/// log P(s, x); keeps precision when P underflows.
inline double log_reg_inc_gamma_lower(double s, double x) {
    detail::require(s > 0.0 && x > 0.0, "log_reg_inc_gamma_lower: need s > 0, x > 0");
    if (x < s + 1.0) {
        double ap = s, del = 1.0 / s, sum = del;
        for (int n = 0; n < 100000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-17)
                return std::log(sum) - x + s * std::log(x) - std::lgamma(s);
        }
        throw NumericFailure("log_reg_inc_gamma_lower: series did not converge");
    }
    return std::log1p(-detail::inc_gamma_cf(s, x));
}

}  // namespace kepseries
