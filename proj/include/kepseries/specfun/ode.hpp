#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "kepseries/errors.hpp"

namespace kepseries {

struct OdeTolerance {
    double rtol = 1e-12;
    double atol = 1e-12;
    double min_step = 1e-14;
    long max_steps = 5'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = rhs(x, y) from x0 to x1.
///
/// `observer(x, y)` is called after every accepted step (and once at x0);
/// returning false stops the integration early. Throws NumericFailure when the
/// step size underflows min_step or the step budget runs out.
template <std::size_t N, class Rhs, class Observer>
std::array<double, N> integrate_dopri(Rhs&& rhs, double x0, std::array<double, N> y, double x1,
                                      const OdeTolerance& tol, Observer&& observer) {
    using State = std::array<double, N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const auto axpy = [](const State& base, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        State out = base;
        for (const auto& [coef, k] : terms)
            for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
        return out;
    };

    double x = x0;
    if (!observer(x, y) || x0 == x1) return y;
    const double dir = x1 > x0 ? 1.0 : -1.0;
    double h = dir * std::min(std::abs(x1 - x0), 1e-4 * std::max(1.0, std::abs(x0)));
    State k1 = rhs(x, y);
    for (long step = 0; step < tol.max_steps; ++step) {
        if (dir * (x + h - x1) > 0.0) h = x1 - x;
        const State k2 = rhs(x + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State k3 = rhs(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = rhs(x + h, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(ei) / sc);
        }
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            x += h;
            y = y_new;
            k1 = k7;
            if (!observer(x, y)) return y;
            if (dir * (x - x1) >= 0.0) return y;
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
        if (std::abs(h) < tol.min_step * std::max(1.0, std::abs(x)))
            throw NumericFailure("integrate_dopri: step size underflow");
    }
    throw NumericFailure("integrate_dopri: step budget exhausted");
}

template <std::size_t N, class Rhs>
std::array<double, N> integrate_dopri(Rhs&& rhs, double x0, std::array<double, N> y, double x1,
                                      const OdeTolerance& tol = {}) {
    return integrate_dopri(std::forward<Rhs>(rhs), x0, y, x1, tol, [](double, const auto&) { return true; });
}

}  // namespace kepseries
