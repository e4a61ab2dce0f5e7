#pragma once

#include <cmath>
#include <limits>

namespace kepseries {

/// Signed quantity stored as sign * exp(log_magnitude).
///
/// Used for p!, (alpha e^f)^p and the like, which overflow a double long
/// before the asymptotic regime of interest. A zero has sign 0 and
/// log_magnitude == -inf.
struct LogValue {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static constexpr LogValue zero() { return {}; }

    static LogValue from_log(double log_mag, int sgn = 1) {
        if (sgn == 0 || log_mag == -std::numeric_limits<double>::infinity()) return zero();
        return {log_mag, sgn > 0 ? 1 : -1};
    }

    static LogValue from_double(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::abs(v)), v > 0 ? 1 : -1};
    }

    bool is_zero() const { return sign == 0; }

    /// May overflow to +-inf or underflow to 0; that is the caller's choice.
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }

    LogValue operator-() const { return {log_magnitude, -sign}; }

    friend LogValue operator*(LogValue a, LogValue b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
    }

    friend LogValue operator/(LogValue a, LogValue b) {
        if (b.sign == 0) return {std::numeric_limits<double>::infinity(), a.sign == 0 ? 1 : a.sign};
        if (a.sign == 0) return zero();
        return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
    }

    friend LogValue operator+(LogValue a, LogValue b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (a.log_magnitude < b.log_magnitude) std::swap(a, b);
        const double r = std::exp(b.log_magnitude - a.log_magnitude);
        if (a.sign == b.sign) return {a.log_magnitude + std::log1p(r), a.sign};
        if (r == 1.0) return zero();
        return {a.log_magnitude + std::log1p(-r), a.sign};
    }

    friend LogValue operator-(LogValue a, LogValue b) { return a + (-b); }

    /// Integer power; the sign follows the parity of n.
    LogValue pow(int n) const {
        if (n == 0) return {0.0, 1};
        if (sign == 0) return zero();
        return {log_magnitude * n, (sign < 0 && n % 2 != 0) ? -1 : 1};
    }
};

}  // namespace kepseries
