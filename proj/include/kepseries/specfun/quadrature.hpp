#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "kepseries/errors.hpp"

namespace kepseries {

enum class QuadratureScheme { gauss_legendre, composite_simpson };

/// Controls integrate(). node_count is nodes per panel for Gauss-Legendre
/// and the initial interval count for Simpson.
struct QuadratureSpec {
    int node_count = 64;
    QuadratureScheme scheme = QuadratureScheme::gauss_legendre;
    double abs_tol = 1e-12;
    int initial_panels = 1;
    int max_halvings = 16;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int n) : nodes(n), weights(n) {
        detail::require(n >= 2, "Gauss-Legendre rule needs at least 2 nodes");
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            // Tricomi initial guess, then Newton on P_n.
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
    }

    template <class F>
    auto apply(F&& f, double a, double b) const {
        using R = std::decay_t<std::invoke_result_t<F&, double>>;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return sum * half;
    }
};

/// Sum of one Gauss-Legendre panel per consecutive pair of breakpoints.
template <class F>
auto integrate_panels(F&& f, std::span<const double> breaks, const GaussLegendreRule& rule) {
    using R = std::decay_t<std::invoke_result_t<F&, double>>;
    R sum{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += rule.apply(f, breaks[i], breaks[i + 1]);
    return sum;
}

/// Splits every panel of a mesh in two.
inline std::vector<double> halve_mesh(std::span<const double> breaks) {
    std::vector<double> out;
    out.reserve(2 * breaks.size());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        out.push_back(breaks[i]);
        out.push_back(0.5 * (breaks[i] + breaks[i + 1]));
    }
    if (!breaks.empty()) out.push_back(breaks.back());
    return out;
}

namespace detail {

template <class F>
double simpson(F& f, double a, double b, long intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (long i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace detail

/// Integrates a real function over [a, b], halving panels until two
/// successive estimates differ by at most spec.abs_tol.
///
/// Throws NumericFailure when spec.max_halvings is exhausted.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    detail::require(a <= b, "integrate: need a <= b");
    detail::require(spec.node_count >= 2, "integrate: node_count must be >= 2");
    detail::require(std::isfinite(spec.abs_tol) && spec.abs_tol >= 0.0, "integrate: abs_tol must be finite");
    if (a == b) return 0.0;

    if (spec.scheme == QuadratureScheme::composite_simpson) {
        long n = std::max(2, spec.node_count) * std::max(1, spec.initial_panels);
        double prev = detail::simpson(f, a, b, n);
        for (int level = 0; level < spec.max_halvings; ++level) {
            n *= 2;
            const double next = detail::simpson(f, a, b, n);
            if (std::abs(next - prev) <= spec.abs_tol) return next;
            prev = next;
        }
        throw NumericFailure("integrate: Simpson refinement budget exhausted");
    }

    const GaussLegendreRule rule(spec.node_count);
    const int panels = std::max(1, spec.initial_panels);
    std::vector<double> mesh(panels + 1);
    for (int i = 0; i <= panels; ++i) mesh[i] = a + (b - a) * i / panels;
    mesh.back() = b;
    double prev = integrate_panels(f, mesh, rule);
    for (int level = 0; level < spec.max_halvings; ++level) {
        mesh = halve_mesh(mesh);
        const double next = integrate_panels(f, mesh, rule);
        if (std::abs(next - prev) <= spec.abs_tol) return next;
        prev = next;
    }
    throw NumericFailure("integrate: Gauss-Legendre refinement budget exhausted");
}

}  // namespace kepseries
