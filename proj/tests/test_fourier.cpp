#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kepseries/fourier.hpp"

using namespace kepseries;

namespace {

constexpr double kPi = std::numbers::pi;

double corrected_ratio(double c) {
    const double f = std::sqrt(1.0 - c * c);
    return c * std::exp(f) / (1.0 + f);
}

// J_n for any integer order.
double jn_any(int n, double x) { return n >= 0 ? bessel_j(n, x) : ((-n) % 2 ? -1.0 : 1.0) * bessel_j(-n, x); }

// True-anomaly coefficient from its Bessel double sum:
// P_p = (2/p) [J_p(pc) + sum_k beta^k (J_{p-k}(pc) + J_{p+k}(pc))], beta = c / (1 + sqrt(1 - c^2)).
double true_anomaly_bessel_sum(double c, int p) {
    const double beta = c / (1.0 + std::sqrt(1.0 - c * c));
    double s = jn_any(p, p * c);
    for (int k = 1; k < 400; ++k) s += std::pow(beta, k) * (jn_any(p - k, p * c) + jn_any(p + k, p * c));
    return 2.0 * s / p;
}

// Real-axis projection (2/pi) int_0^pi (v(u) - u) sin(p u) du with the real Newton solver.
double true_anomaly_real_axis(double c, int p) {
    const Orbit orbit(c);
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.initial_panels = 4 * p;
    const auto f = [&](double u) {
        const double th = solve_kepler_newton(orbit, u, 1e-15).theta;
        return (eccentric_to_true(orbit, th) - u) * std::sin(p * u);
    };
    return 2.0 / kPi * integrate(f, 0.0, kPi, spec);
}

}  // namespace

TEST(ClosedForms, EccentricExamples) {
    EXPECT_EQ(coeff_eccentric_bessel(0.0, 3), 0.0);
    EXPECT_NEAR(coeff_eccentric_bessel(0.5, 1), 2.0 * bessel_j_integral(1, 0.5), 1e-14);
    EXPECT_NEAR(coeff_eccentric_bessel(0.5, 1), 0.4845369153, 1e-10);
    EXPECT_NEAR(coeff_eccentric_bessel(0.3, 2), fourier_quadrature(Family::eccentric_sine, 0.3, 2), 1e-10);
}

TEST(ClosedForms, RadiusExamples) {
    EXPECT_EQ(coeff_radius_bessel(0.0, 2), 0.0);
    EXPECT_NEAR(coeff_radius_bessel(0.5, 1), -0.5 * (bessel_j_integral(0, 0.5) - bessel_j_integral(2, 0.5)), 1e-14);
    EXPECT_NEAR(coeff_radius_bessel(0.3, 4), fourier_quadrature(Family::radius_cosine, 0.3, 4), 1e-10);
    EXPECT_DOUBLE_EQ(coeff_radius_bessel(0.5, 0), 1.125);
}

TEST(ClosedForms, DomainErrors) {
    EXPECT_THROW(coeff_eccentric_bessel(1.0, 1), DomainError);
    EXPECT_THROW(coeff_eccentric_bessel(0.5, 0), DomainError);
    EXPECT_THROW(fourier_quadrature(Family::true_anomaly_sine, 0.5, 0), DomainError);
    EXPECT_THROW(build_table(Family::true_anomaly_sine, 0.5, 5, CoefficientSource::bessel_closed_form), DomainError);
}

TEST(Quadrature, CircularOrbit) {
    EXPECT_EQ(fourier_quadrature(Family::eccentric_sine, 0.0, 1), 0.0);
    EXPECT_EQ(fourier_quadrature(Family::radius_mean_cosine, 0.0, 0), 1.0);
    EXPECT_EQ(fourier_quadrature(Family::radius_mean_cosine, 0.0, 3), 0.0);
}

TEST(Quadrature, RadiusMeanConstantTerm) {
    EXPECT_NEAR(fourier_quadrature(Family::radius_mean_cosine, 0.5, 0), 1.125, 1e-14);
}

TEST(Quadrature, OracleEquivalenceWithClosedForms) {
    for (double c : {0.1, 0.3, 0.5})
        for (int n = 1; n <= 20; ++n) {
            EXPECT_NEAR(fourier_quadrature(Family::eccentric_sine, c, n), coeff_eccentric_bessel(c, n), 1e-10);
            EXPECT_NEAR(fourier_quadrature(Family::radius_cosine, c, n), coeff_radius_bessel(c, n), 1e-10);
        }
}

TEST(Quadrature, TrueAnomalyMatchesRealAxisProjection) {
    for (double c : {0.2, 0.5, 0.8})
        for (int p : {1, 2, 5, 10}) {
            const double q = fourier_quadrature(Family::true_anomaly_sine, c, p);
            EXPECT_NEAR(q, true_anomaly_real_axis(c, p), 1e-11 * std::max(1.0, std::abs(q))) << c << " " << p;
        }
    EXPECT_GT(fourier_quadrature(Family::true_anomaly_sine, 0.5, 1), 0.0);
}

TEST(Quadrature, TrueAnomalyMatchesBesselDoubleSum) {
    for (int p : {1, 5, 10, 20, 30, 50}) {
        const double exact = true_anomaly_bessel_sum(0.5, p);
        EXPECT_NEAR(fourier_quadrature(Family::true_anomaly_sine, 0.5, p) / exact, 1.0, 1e-11) << p;
    }
}

TEST(Quadrature, ResolvesExponentiallySmallCoefficients) {
    // 60-digit evaluation of the Bessel double sum.
    const double p200 = 3.55830152246306e-42;
    EXPECT_NEAR(fourier_quadrature(Family::true_anomaly_sine, 0.5, 200) / p200, 1.0, 1e-11);
    const double a200 = coeff_eccentric_bessel(0.5, 200);
    EXPECT_NEAR(fourier_quadrature(Family::eccentric_sine, 0.5, 200) / a200, 1.0, 1e-11);
}

TEST(Quadrature, RadiusFamiliesCoincide) {
    for (int p : {1, 7, 40})
        EXPECT_NEAR(fourier_quadrature(Family::radius_mean_cosine, 0.6, p) / coeff_radius_bessel(0.6, p), 1.0, 1e-10);
}

TEST(Quadrature, HighEccentricity) {
    for (int n : {1, 10, 60})
        EXPECT_NEAR(fourier_quadrature(Family::eccentric_sine, 0.95, n) / coeff_eccentric_bessel(0.95, n), 1.0, 1e-10);
}

TEST(Table, AccessAndErrors) {
    const auto t = build_table(Family::radius_cosine, 0.5, 4, CoefficientSource::bessel_closed_form);
    EXPECT_EQ(t.first_index(), 0);
    EXPECT_EQ(t.max_index(), 4);
    EXPECT_DOUBLE_EQ(t.at(0), 1.125);
    EXPECT_THROW(t.at(5), IncompleteTableError);
    const auto s = build_table(Family::eccentric_sine, 0.5, 3, CoefficientSource::bessel_closed_form);
    EXPECT_EQ(s.first_index(), 1);
    EXPECT_EQ(s.values().size(), 3u);
    EXPECT_THROW(s.at(0), IncompleteTableError);
}

TEST(EvalTruncated, Examples) {
    const auto zero = build_table(Family::eccentric_sine, 0.0, 10, CoefficientSource::bessel_closed_form);
    EXPECT_DOUBLE_EQ(eval_truncated(zero, 1.3, 10), 1.3);

    const auto a = build_table(Family::eccentric_sine, 0.3, 30, CoefficientSource::bessel_closed_form);
    EXPECT_NEAR(eval_truncated(a, 1.0, 30), solve_kepler_newton(Orbit(0.3), 1.0, 1e-15).theta, 1e-10);

    const auto q = build_table(Family::radius_mean_cosine, 0.5, 50, CoefficientSource::fourier_quadrature);
    const double th = solve_kepler_newton(Orbit(0.5), 0.7, 1e-15).theta;
    EXPECT_NEAR(eval_truncated(q, 0.7, 50), radius(Orbit(0.5), th), 1e-8);

    EXPECT_THROW(eval_truncated(a, 1.0, 31), IncompleteTableError);
}

TEST(EvalTruncated, TrueAnomalySeries) {
    const auto p = build_table(Family::true_anomaly_sine, 0.5, 60, CoefficientSource::fourier_quadrature);
    const Orbit orbit(0.5);
    for (double u : {0.3, 1.7, 4.0}) {
        const double v = eccentric_to_true(orbit, solve_kepler_newton(orbit, u, 1e-15).theta);
        EXPECT_NEAR(eval_truncated(p, u, 60), v, 1e-10) << u;
    }
}

TEST(EvalTruncated, TruncationErrorDecaysGeometrically) {
    const double c = 0.5;
    const Orbit orbit(c);
    const auto t = build_table(Family::eccentric_sine, c, 30, CoefficientSource::bessel_closed_form);
    std::vector<double> xs, ys;
    for (int N = 2; N <= 24; N += 2) {
        double sup = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double u = 2 * kPi * (i + 0.5) / 200;
            sup = std::max(sup, std::abs(eval_truncated(t, u, N) - solve_kepler_newton(orbit, u, 1e-15).theta));
        }
        xs.push_back(N);
        ys.push_back(std::log(sup));
    }
    const double n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    EXPECT_LT(sxy / sxx, 0.0);
    EXPECT_GT(sxy * sxy / (sxx * syy), 0.99);
}

TEST(GeometricRate, EccentricFamilyMatchesCorrectedRatio) {
    const auto t = build_table(Family::eccentric_sine, 0.5, 200, CoefficientSource::bessel_closed_form);
    EXPECT_NEAR(corrected_ratio(0.5), 0.63706, 1e-4);
    EXPECT_NEAR(empirical_geometric_rate(t, 50, 200) / corrected_ratio(0.5), 1.0, 0.01);
}

TEST(GeometricRate, WindowInvariance) {
    const auto t = build_table(Family::eccentric_sine, 0.5, 200, CoefficientSource::bessel_closed_form);
    const double full = empirical_geometric_rate(t, 50, 200);
    for (auto [lo, hi] : {std::pair{50, 120}, {100, 200}, {80, 160}})
        EXPECT_NEAR(empirical_geometric_rate(t, lo, hi) / full, 1.0, 0.02);
}

TEST(GeometricRate, SmallEccentricityTrend) {
    std::vector<double> per_c;
    for (double c : {0.04, 0.02, 0.01}) {
        const auto t = build_table(Family::eccentric_sine, c, 40, CoefficientSource::bessel_closed_form);
        per_c.push_back(empirical_geometric_rate(t, 10, 40) / c);
    }
    for (double r : per_c) EXPECT_NEAR(r / (std::numbers::e / 2), 1.0, 0.02);
    EXPECT_NEAR(per_c[2] / per_c[1], 1.0, 0.01);
}

TEST(GeometricRate, ConvergentBeyondHistoricalThreshold) {
    const auto t = build_table(Family::eccentric_sine, 0.8, 200, CoefficientSource::bessel_closed_form);
    const double r = empirical_geometric_rate(t, 50, 200);
    EXPECT_LT(r, 1.0);
    EXPECT_NEAR(r / corrected_ratio(0.8), 1.0, 0.01);
}

TEST(GeometricRate, Errors) {
    const auto zero = build_table(Family::eccentric_sine, 0.0, 10, CoefficientSource::bessel_closed_form);
    EXPECT_THROW(empirical_geometric_rate(zero, 2, 8), DegenerateFitError);
    const auto t = build_table(Family::eccentric_sine, 0.5, 10, CoefficientSource::bessel_closed_form);
    EXPECT_THROW(empirical_geometric_rate(t, 5, 5), DomainError);
    EXPECT_THROW(empirical_geometric_rate(t, 2, 20), IncompleteTableError);
}

TEST(Parity, LowOrderEccentricCoefficientsPositive) {
    for (int n = 1; n <= 5; ++n) EXPECT_GT(coeff_eccentric_bessel(0.1, n), 0.0);
}

TEST(Families, NamesRoundTrip) {
    for (auto f : {Family::eccentric_sine, Family::radius_cosine, Family::true_anomaly_sine, Family::radius_mean_cosine})
        EXPECT_EQ(parse_family(to_string(f)), f);
    EXPECT_FALSE(parse_family("bogus").has_value());
}
