#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "kepseries/errors.hpp"
#include "kepseries/specfun/ode.hpp"

namespace kepseries {

/// y'' + y + alpha y^2 = b, y(0) = y0, y'(0) = 0, on [0, L], expanded
/// through order N in alpha.
struct PerturbProblem {
    double alpha = 0.0;
    double b = 0.0;
    double y0 = 1.0;
    int order = 1;
    double L = 2.0 * std::numbers::pi;

    void validate() const {
        detail::require(std::isfinite(alpha) && std::isfinite(b) && std::isfinite(y0), "PerturbProblem: non-finite input");
        detail::require(order >= 0 && order <= 3, "PerturbProblem: order must lie in 0..3");
        detail::require(L > 0.0 && std::isfinite(L), "PerturbProblem: L must be positive and finite");
    }
};

/// Sum over m of e^{i m x} * poly_m(x), complex coefficients, constant first.
class TrigPoly {
public:
    using cd = std::complex<double>;
    using Poly = std::vector<cd>;

    static TrigPoly constant(double v) { return TrigPoly{}.add_term(0, {v}); }

    static TrigPoly cosine(double amp) { return TrigPoly{}.add_term(1, {0.5 * amp}).add_term(-1, {0.5 * amp}); }

    static TrigPoly sine(double amp) {
        const cd h = amp / cd(0.0, 2.0);
        return TrigPoly{}.add_term(1, {h}).add_term(-1, {-h});
    }

    TrigPoly& add_term(int m, const Poly& p) {
        if (p.empty()) return *this;
        Poly& dst = terms_[m];
        if (dst.size() < p.size()) dst.resize(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) dst[j] += p[j];
        return *this;
    }

    const std::map<int, Poly>& terms() const { return terms_; }

    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) {
        for (const auto& [m, p] : b.terms_) a.add_term(m, p);
        return a;
    }

    friend TrigPoly operator*(double s, TrigPoly a) {
        for (auto& [m, p] : a.terms_)
            for (auto& v : p) v *= s;
        return a;
    }

    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        TrigPoly out;
        for (const auto& [ma, pa] : a.terms_)
            for (const auto& [mb, pb] : b.terms_) {
                Poly prod(pa.size() + pb.size() - 1);
                for (std::size_t i = 0; i < pa.size(); ++i)
                    for (std::size_t j = 0; j < pb.size(); ++j) prod[i + j] += pa[i] * pb[j];
                out.add_term(ma + mb, prod);
            }
        return out;
    }

    /// Value (derivative = 0) or first derivative (derivative = 1); real part.
    double eval(double x, int derivative = 0) const {
        cd sum = 0.0;
        for (const auto& [m, p] : terms_) {
            cd poly = 0.0, dpoly = 0.0;
            for (std::size_t j = p.size(); j-- > 0;) {
                dpoly = dpoly * x + poly;
                poly = poly * x + p[j];
            }
            const cd e = std::exp(cd(0.0, m * x));
            sum += derivative == 0 ? e * poly : e * (cd(0.0, m) * poly + dpoly);
        }
        return sum.real();
    }

    double operator()(double x) const { return eval(x); }

private:
    std::map<int, Poly> terms_;
};

namespace detail {

/// q with q'' + 2im q' + (1 - m^2) q = x^k. Polynomial of degree k, or k + 1
/// at resonance (m = +-1).
inline TrigPoly::Poly driven_monomial(int m, int k) {
    using cd = std::complex<double>;
    const cd two_im(0.0, 2.0 * m);
    if (m * m != 1) {
        const double d = 1.0 - static_cast<double>(m) * m;
        TrigPoly::Poly q(k + 3, 0.0);
        for (int j = k; j >= 0; --j)
            q[j] = ((j == k ? 1.0 : 0.0) - two_im * double(j + 1) * q[j + 1] - double(j + 2) * (j + 1) * q[j + 2]) / d;
        q.resize(k + 1);
        return q;
    }
    // Resonant: r = q' solves r' + 2im r = x^k.
    TrigPoly::Poly r(k + 2, 0.0);
    for (int j = k; j >= 0; --j) r[j] = ((j == k ? 1.0 : 0.0) - double(j + 1) * r[j + 1]) / two_im;
    TrigPoly::Poly q(k + 2, 0.0);
    for (int j = 0; j <= k; ++j) q[j + 1] = r[j] / double(j + 1);
    return q;
}

}  // namespace detail

/// u with u'' + u = forcing and u(0) = u'(0) = 0, in closed form.
inline TrigPoly solve_driven_oscillator(const TrigPoly& forcing) {
    TrigPoly u;
    for (const auto& [m, p] : forcing.terms()) {
        TrigPoly::Poly q;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] == 0.0) continue;
            const auto qk = detail::driven_monomial(m, static_cast<int>(k));
            if (q.size() < qk.size()) q.resize(qk.size());
            for (std::size_t j = 0; j < qk.size(); ++j) q[j] += p[k] * qk[j];
        }
        u.add_term(m, q);
    }
    const double u0 = u.eval(0.0), du0 = u.eval(0.0, 1);
    return u + TrigPoly::cosine(-u0) + TrigPoly::sine(-du0);
}

/// The cascade Y0 + alpha Y1 + alpha^2 Y2 + alpha^3 Y3:
///   Y0'' + Y0 = b,              Y0(0) = y0, Y0'(0) = 0
///   Y1'' + Y1 = -Y0^2
///   Y2'' + Y2 = -2 Y0 Y1
///   Y3'' + Y3 = -Y1^2 - 2 Y0 Y2
/// with zero initial data for every correction.
class CascadeSolution {
public:
    explicit CascadeSolution(const PerturbProblem& pr) : alpha_(pr.alpha) {
        pr.validate();
        terms_.push_back(TrigPoly::constant(pr.b) + TrigPoly::cosine(pr.y0 - pr.b));
        const auto& Y0 = terms_[0];
        if (pr.order >= 1) terms_.push_back(solve_driven_oscillator(-1.0 * (Y0 * Y0)));
        if (pr.order >= 2) terms_.push_back(solve_driven_oscillator(-2.0 * (terms_[0] * terms_[1])));
        if (pr.order >= 3)
            terms_.push_back(
                solve_driven_oscillator(-1.0 * (terms_[1] * terms_[1]) + -2.0 * (terms_[0] * terms_[2])));
    }

    int order() const { return static_cast<int>(terms_.size()) - 1; }
    const TrigPoly& term(int k) const { return terms_.at(k); }

    double operator()(double x) const {
        double sum = 0.0, w = 1.0;
        for (const auto& t : terms_) {
            sum += w * t(x);
            w *= alpha_;
        }
        return sum;
    }

private:
    double alpha_;
    std::vector<TrigPoly> terms_;
};

inline CascadeSolution cascade_solution(const PerturbProblem& pr) { return CascadeSolution(pr); }

/// Numerical solution with quintic Hermite dense output between steps.
class DenseSolution {
public:
    struct Node {
        double x, y, dy, ddy;
    };

    explicit DenseSolution(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    double operator()(double x) const {
        detail::require(x >= nodes_.front().x && x <= nodes_.back().x, "DenseSolution: x outside the solved interval");
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x, [](double v, const Node& n) { return v < n.x; });
        if (it == nodes_.end()) return nodes_.back().y;
        const Node& b = *it;
        const Node& a = *(it - 1);
        const double h = b.x - a.x;
        const double t = (x - a.x) / h, t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
        const double h3 = 0.5 * (t3 - 2 * t4 + t5);
        const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
        const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
        return a.y * h0 + h * a.dy * h1 + h * h * a.ddy * h2 + h * h * b.ddy * h3 + h * b.dy * h4 + b.y * h5;
    }

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
};

inline constexpr double kBlowUpThreshold = 1e6;

/// Adaptive Dormand-Prince integration of y'' = b - y - alpha y^2 on [0, L].
inline DenseSolution nonlinear_oracle(const PerturbProblem& pr) {
    pr.validate();
    const auto accel = [&](double y) { return pr.b - y - pr.alpha * y * y; };
    const auto rhs = [&](double, const std::array<double, 2>& s) { return std::array<double, 2>{s[1], accel(s[0])}; };
    std::vector<DenseSolution::Node> nodes;
    bool blew_up = false;
    const auto observer = [&](double x, const std::array<double, 2>& s) {
        if (!std::isfinite(s[0]) || std::abs(s[0]) > kBlowUpThreshold) {
            blew_up = true;
            return false;
        }
        nodes.push_back({x, s[0], s[1], accel(s[0])});
        return true;
    };
    try {
        integrate_dopri<2>(rhs, 0.0, {pr.y0, 0.0}, pr.L, OdeTolerance{}, observer);
    } catch (const NumericFailure&) {
        // Step-size collapse is how a finite-time singularity shows up.
        throw DivergenceError("nonlinear_oracle: solution blew up before x = L");
    }
    if (blew_up) throw DivergenceError("nonlinear_oracle: solution exceeded 1e6 before x = L");
    return DenseSolution(std::move(nodes));
}

/// Sup over a uniform grid of [0, L] of |cascade - oracle|.
inline double cascade_sup_error(const PerturbProblem& pr, int samples = 2001) {
    const auto cascade = cascade_solution(pr);
    const auto oracle = nonlinear_oracle(pr);
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = pr.L * i / (samples - 1);
        sup = std::max(sup, std::abs(cascade(x) - oracle(x)));
    }
    return sup;
}

struct OrderScalingRow {
    double alpha;
    int order;
    double sup_error;
};

struct OrderScalingReport {
    std::vector<OrderScalingRow> rows;
    double slope;  // least-squares slope of log(sup_error) against log(alpha)
};

inline OrderScalingReport order_scaling_report(const PerturbProblem& pr, const std::vector<double>& alphas) {
    pr.validate();
    detail::require(alphas.size() >= 3, "order_scaling_report: need at least three alphas");
    OrderScalingReport rep;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double a : alphas) {
        detail::require(a > 0.0, "order_scaling_report: alphas must be positive");
        PerturbProblem q = pr;
        q.alpha = a;
        const double err = cascade_sup_error(q);
        if (!(err > 0.0)) throw DegenerateFitError("order_scaling_report: zero error, slope undefined");
        rep.rows.push_back({a, pr.order, err});
        const double lx = std::log(a), ly = std::log(err);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(alphas.size());
    const double den = n * sxx - sx * sx;
    if (!(den > 0.0)) throw DegenerateFitError("order_scaling_report: alphas must be distinct");
    rep.slope = (n * sxy - sx * sy) / den;
    return rep;
}

}  // namespace kepseries
