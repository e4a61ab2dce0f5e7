#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kepseries/errors.hpp"
#include "kepseries/kepler.hpp"
#include "kepseries/specfun/bessel.hpp"
#include "kepseries/specfun/quadrature.hpp"

namespace kepseries {

/// The four trigonometric expansions in the mean anomaly u (a = 1):
///   eccentric_sine      theta = u + sum A_n sin(n u)
///   radius_cosine       r = 1 + c^2/2 + sum B_n cos(n u)
///   true_anomaly_sine   v = u + sum P_p sin(p u)
///   radius_mean_cosine  r = sum_{p>=0} Q_p cos(p u)
/// Cosine tables store the constant term at index 0.
enum class Family { eccentric_sine, radius_cosine, true_anomaly_sine, radius_mean_cosine };

enum class CoefficientSource { bessel_closed_form, fourier_quadrature };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::eccentric_sine: return "eccentric_sine";
        case Family::radius_cosine: return "radius_cosine";
        case Family::true_anomaly_sine: return "true_anomaly_sine";
        case Family::radius_mean_cosine: return "radius_mean_cosine";
    }
    return "?";
}

inline std::string_view to_string(CoefficientSource s) {
    return s == CoefficientSource::bessel_closed_form ? "bessel_closed_form" : "fourier_quadrature";
}

inline std::optional<Family> parse_family(std::string_view s) {
    for (auto f : {Family::eccentric_sine, Family::radius_cosine, Family::true_anomaly_sine, Family::radius_mean_cosine})
        if (s == to_string(f)) return f;
    return std::nullopt;
}

inline bool is_sine(Family f) { return f == Family::eccentric_sine || f == Family::true_anomaly_sine; }
inline int first_index(Family f) { return is_sine(f) ? 1 : 0; }

namespace detail {

inline void require_eccentricity(double c) {
    require(c >= 0.0 && c < 1.0, "eccentricity must lie in [0, 1)");
}

}  // namespace detail

/// A_n = (2/n) J_n(n c).
inline double coeff_eccentric_bessel(double c, int n) {
    detail::require_eccentricity(c);
    detail::require(n >= 1, "coeff_eccentric_bessel: n must be >= 1");
    return 2.0 / n * bessel_j(n, n * c);
}

/// B_n = -(2c/n) J_n'(n c); index 0 is the constant term 1 + c^2/2.
inline double coeff_radius_bessel(double c, int n) {
    detail::require_eccentricity(c);
    detail::require(n >= 0, "coeff_radius_bessel: n must be >= 0");
    if (n == 0) return 1.0 + 0.5 * c * c;
    return -2.0 * c / n * bessel_j_prime(n, n * c);
}

/// Fourier coefficient of a family by direct projection, independent of the
/// Bessel closed forms. Kepler's equation is solved pointwise by Newton.
///
/// The functions theta(u), v(u), r(u) are analytic in the strip
/// |Im u| < beta - f (beta = -ln alpha), with branch points at Re u = 0. The
/// projection integral is taken on the shifted line Im u = -tau,
/// tau = max(0, beta - f - 1/n), which multiplies the integrand by e^{n tau}
/// and so keeps exponentially small coefficients resolvable. Panels are
/// proportional to the index (8 per oscillation period) and graded toward
/// the branch point.
inline double fourier_quadrature(Family family, double c, int index) {
    detail::require_eccentricity(c);
    detail::require(index >= first_index(family), "fourier_quadrature: index below the family's range");
    using cd = std::complex<double>;
    constexpr double pi = std::numbers::pi;
    const int n = index;
    if (c == 0.0) return (!is_sine(family) && n == 0) ? 1.0 : 0.0;

    const double f = std::sqrt(1.0 - c * c);
    const double alpha = c / (1.0 + f);
    const double gap = -std::log(alpha) - f;
    const double tau = n >= 1 ? std::max(0.0, gap - 1.0 / n) : 0.0;
    const double dist = gap - tau;

    // Returns (projected value, its magnitude) packed in a complex so one
    // quadrature pass also yields the L1 scale of the integrand.
    const auto integrand = [&](double t) -> cd {
        const cd u(t, -tau);
        cd theta;
        try {
            theta = solve_kepler_complex(c, u, u);
        } catch (const ConvergenceError&) {
            // Continue in tau from the real axis.
            theta = cd(t, 0.0) + c * std::sin(t);
            for (int k = 1; k <= 16; ++k) theta = solve_kepler_complex(c, cd(t, -tau * k / 16.0), theta);
        }
        cd value;
        switch (family) {
            case Family::eccentric_sine: value = theta - u; break;
            case Family::true_anomaly_sine: {
                const cd i(0.0, 1.0);
                const cd v = theta - i * (std::log(1.0 - alpha * std::exp(-i * theta)) -
                                          std::log(1.0 - alpha * std::exp(i * theta)));
                value = v - u;
                break;
            }
            case Family::radius_cosine:
            case Family::radius_mean_cosine: value = 1.0 - c * std::cos(theta); break;
        }
        const cd g = value * std::exp(cd(0.0, -n * t));
        const double projected = is_sine(family) ? g.imag() : g.real();
        return {projected, std::abs(projected)};
    };

    // Mesh on [0, pi]: 4n panels (8 per period over the full circle),
    // geometrically refined toward t = 0 down to the branch-point distance.
    const int panels = std::max(8, 4 * n);
    const double h = pi / panels;
    std::vector<double> mesh{0.0};
    for (double w = h; w > 0.5 * dist && w > 1e-12; w *= 0.5) mesh.insert(mesh.begin() + 1, w * 0.5);
    for (int i = 1; i <= panels; ++i) mesh.push_back(pi * i / panels);

    static const GaussLegendreRule rule(16);
    double prev = integrate_panels(integrand, mesh, rule).real();
    for (int level = 0; level < 6; ++level) {
        mesh = halve_mesh(mesh);
        const cd both = integrate_panels(integrand, mesh, rule);
        const double next = both.real();
        if (std::abs(next - prev) <= 1e-13 * std::abs(next) + 1e-15 * both.imag()) {
            const double factor = std::exp(-n * tau) / pi;
            if (is_sine(family)) return -2.0 * factor * next;
            return n == 0 ? factor * next : 2.0 * factor * next;
        }
        prev = next;
    }
    throw NumericFailure("fourier_quadrature: refinement budget exhausted");
}

/// Dense coefficient table for one family at one eccentricity.
class CoefficientTable {
public:
    CoefficientTable(Family family, double eccentricity, CoefficientSource source, std::vector<double> values)
        : family_(family), c_(eccentricity), source_(source), values_(std::move(values)) {
        for (double v : values_) detail::require(std::isfinite(v), "CoefficientTable: non-finite coefficient");
    }

    Family family() const { return family_; }
    double eccentricity() const { return c_; }
    CoefficientSource source() const { return source_; }
    int first_index() const { return kepseries::first_index(family_); }
    int max_index() const { return first_index() + static_cast<int>(values_.size()) - 1; }
    bool has(int index) const { return index >= first_index() && index <= max_index(); }

    double at(int index) const {
        if (!has(index)) throw IncompleteTableError("CoefficientTable: index " + std::to_string(index) + " missing");
        return values_[index - first_index()];
    }

    const std::vector<double>& values() const { return values_; }

private:
    Family family_;
    double c_;
    CoefficientSource source_;
    std::vector<double> values_;
};

/// Builds the table up to pmax. Closed forms exist only for the eccentric
/// and radius Bessel families.
inline CoefficientTable build_table(Family family, double c, int pmax, CoefficientSource source) {
    detail::require_eccentricity(c);
    detail::require(pmax >= first_index(family), "build_table: pmax below the family's first index");
    std::vector<double> values;
    values.reserve(pmax + 1);
    for (int k = first_index(family); k <= pmax; ++k) {
        if (source == CoefficientSource::fourier_quadrature) {
            values.push_back(fourier_quadrature(family, c, k));
        } else if (family == Family::eccentric_sine) {
            values.push_back(coeff_eccentric_bessel(c, k));
        } else if (family == Family::radius_cosine) {
            values.push_back(coeff_radius_bessel(c, k));
        } else {
            throw DomainError("build_table: no closed form for " + std::string(to_string(family)));
        }
    }
    return {family, c, source, std::move(values)};
}

/// Partial sum through index N: u + sum a_n sin(n u) for sine families,
/// sum_{n=0}^{N} a_n cos(n u) for cosine families.
inline double eval_truncated(const CoefficientTable& table, double u, int N) {
    if (N > table.max_index())
        throw IncompleteTableError("eval_truncated: table holds indices only up to " +
                                   std::to_string(table.max_index()));
    double sum = is_sine(table.family()) ? u : 0.0;
    for (int k = table.first_index(); k <= N; ++k)
        sum += table.at(k) * (is_sine(table.family()) ? std::sin(k * u) : std::cos(k * u));
    return sum;
}

/// Measured geometric ratio r of |a_p| over [p_min, p_max].
///
/// Fits log|a_p| = c0 + p log r + gamma log p by least squares, so an
/// algebraic prefactor p^gamma does not bias r. With fewer than four points
/// the log p term is dropped.
inline double empirical_geometric_rate(const CoefficientTable& table, int p_min, int p_max) {
    detail::require(p_min >= 1 && p_max > p_min, "empirical_geometric_rate: need p_max > p_min >= 1");
    if (!table.has(p_min) || !table.has(p_max))
        throw IncompleteTableError("empirical_geometric_rate: window exceeds table");
    const int count = p_max - p_min + 1;
    std::vector<double> ps, ls, ys;
    for (int p = p_min; p <= p_max; ++p) {
        const double a = table.at(p);
        if (a == 0.0 || !std::isfinite(std::log(std::abs(a))))
            throw DegenerateFitError("empirical_geometric_rate: zero coefficient at index " + std::to_string(p));
        ps.push_back(p);
        ls.push_back(std::log(static_cast<double>(p)));
        ys.push_back(std::log(std::abs(a)));
    }
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    const double mp = mean(ps), ml = mean(ls), my = mean(ys);
    double spp = 0, spl = 0, sll = 0, spy = 0, sly = 0;
    for (int i = 0; i < count; ++i) {
        const double dp = ps[i] - mp, dl = ls[i] - ml, dy = ys[i] - my;
        spp += dp * dp;
        spl += dp * dl;
        sll += dl * dl;
        spy += dp * dy;
        sly += dl * dy;
    }
    double slope;
    const double det = spp * sll - spl * spl;
    if (count >= 4 && det > 1e-12 * spp * sll) slope = (spy * sll - sly * spl) / det;
    else slope = spy / spp;
    return std::exp(slope);
}

}  // namespace kepseries
