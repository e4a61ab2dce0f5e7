#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "kepseries/errors.hpp"

namespace kepseries {

/// Elliptic orbit shape: eccentricity c in [0, 1) and semi-major axis a > 0.
class Orbit {
public:
    explicit Orbit(double eccentricity, double semi_major = 1.0) : c_(eccentricity), a_(semi_major) {
        detail::require(c_ >= 0.0 && c_ < 1.0, "Orbit: eccentricity must lie in [0, 1)");
        detail::require(a_ > 0.0 && std::isfinite(a_), "Orbit: semi-major axis must be positive");
    }

    double eccentricity() const { return c_; }
    double semi_major() const { return a_; }

private:
    double c_;
    double a_;
};

enum class SolveMethod { newton, fixed_point };

inline const char* to_string(SolveMethod m) { return m == SolveMethod::newton ? "newton" : "fixed_point"; }

struct SolveReport {
    double theta = 0.0;
    int iterations = 0;
    double residual = 0.0;  ///< |theta - c sin(theta) - u|
    SolveMethod method = SolveMethod::newton;
    bool converged = true;
};

/// Mean, eccentric and true anomaly plus radius of one orbital position.
struct AnomalyState {
    double mean = 0.0;
    double eccentric = 0.0;
    double true_anomaly = 0.0;
    double radius = 0.0;
};

/// Reduces an angle to [0, 2 pi).
inline double normalize_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

inline double mean_from_eccentric(const Orbit& orbit, double theta) {
    return theta - orbit.eccentricity() * std::sin(theta);
}

namespace detail {

inline double kepler_residual(double c, double theta, double u) { return std::abs(theta - c * std::sin(theta) - u); }

// Splits u into a multiple of 2 pi and a remainder in [0, 2 pi).
inline double revolution_offset(double u) {
    return u - normalize_angle(u);
}

}  // namespace detail

/// Newton iteration on g(theta) = theta - c sin(theta) - u, seeded with
/// theta0 = u + 0.85 c sign(sin u). Throws ConvergenceError after 64 steps.
inline SolveReport solve_kepler_newton(const Orbit& orbit, double u, double tol) {
    detail::require(tol > 0.0, "solve_kepler_newton: tol must be positive");
    detail::require(std::isfinite(u), "solve_kepler_newton: u must be finite");
    const double c = orbit.eccentricity();
    const double offset = detail::revolution_offset(u);
    const double m = u - offset;
    const double s = std::sin(m);
    double theta = m + 0.85 * c * (s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0));
    SolveReport rep{.method = SolveMethod::newton};
    for (int it = 0; it <= 64; ++it) {
        if (detail::kepler_residual(c, theta, m) <= tol) {
            rep.theta = theta + offset;
            rep.iterations = it;
            rep.residual = detail::kepler_residual(c, rep.theta, u);
            return rep;
        }
        theta -= (theta - c * std::sin(theta) - m) / (1.0 - c * std::cos(theta));
    }
    throw ConvergenceError("solve_kepler_newton: iteration cap exceeded");
}

/// Successive approximation theta_{k+1} = u + c sin(theta_k), starting at
/// theta_0 = u. The contraction factor is at most c, so the iteration count
/// grows without bound as c -> 1. Non-convergence is reported, not thrown.
inline SolveReport solve_kepler_fixed_point(const Orbit& orbit, double u, double tol, int max_iter) {
    detail::require(tol > 0.0, "solve_kepler_fixed_point: tol must be positive");
    detail::require(max_iter >= 1, "solve_kepler_fixed_point: max_iter must be >= 1");
    detail::require(std::isfinite(u), "solve_kepler_fixed_point: u must be finite");
    const double c = orbit.eccentricity();
    const double offset = detail::revolution_offset(u);
    const double m = u - offset;
    double theta = m;
    int it = 0;
    double res = detail::kepler_residual(c, theta, m);
    while (res > tol && it < max_iter) {
        theta = m + c * std::sin(theta);
        ++it;
        res = detail::kepler_residual(c, theta, m);
    }
    SolveReport rep{.theta = theta + offset, .iterations = it, .method = SolveMethod::fixed_point};
    rep.residual = detail::kepler_residual(c, rep.theta, u);
    rep.converged = res <= tol;
    return rep;
}

/// True anomaly from eccentric anomaly on the continuous branch:
/// v = theta + 2 atan2(beta sin theta, 1 - beta cos theta), beta = c / (1 + sqrt(1 - c^2)).
/// Equivalent to 2 atan(sqrt((1+c)/(1-c)) tan(theta/2)) without its poles;
/// v - theta is 2 pi periodic, v(0) = 0 and v(pi) = pi.
inline double eccentric_to_true(const Orbit& orbit, double theta) {
    const double c = orbit.eccentricity();
    const double beta = c / (1.0 + std::sqrt(1.0 - c * c));
    return theta + 2.0 * std::atan2(beta * std::sin(theta), 1.0 - beta * std::cos(theta));
}

inline double radius(const Orbit& orbit, double theta) {
    return orbit.semi_major() * (1.0 - orbit.eccentricity() * std::cos(theta));
}

inline AnomalyState anomaly_state(const Orbit& orbit, double u, double tol = 1e-14) {
    const auto rep = solve_kepler_newton(orbit, u, tol);
    return {u, rep.theta, eccentric_to_true(orbit, rep.theta), radius(orbit, rep.theta)};
}

/// Newton solve of theta - c sin(theta) = u for complex u, used to evaluate
/// anomalies on contours off the real axis.
inline std::complex<double> solve_kepler_complex(double c, std::complex<double> u, std::complex<double> seed,
                                                 double tol = 1e-15) {
    std::complex<double> theta = seed;
    int polish = -1;
    for (int it = 0; it < 100; ++it) {
        const auto d = (theta - c * std::sin(theta) - u) / (1.0 - c * std::cos(theta));
        theta -= d;
        const double scale = std::max(1.0, std::abs(theta));
        if (std::abs(d) <= tol * scale || polish == 0) return theta;
        // Near the branch points rounding can keep the step above tol;
        // two polishing steps after reaching 1e-8 suffice for quadratic convergence.
        if (polish > 0) --polish;
        else if (polish < 0 && std::abs(d) <= 1e-8 * scale) polish = 1;
    }
    throw ConvergenceError("solve_kepler_complex: Newton did not converge");
}

}  // namespace kepseries
