#pragma once

#include <cmath>
#include <limits>

#include "kepseries/errors.hpp"

namespace kepseries {

struct Bracket {
    double lo;
    double hi;
};

namespace detail {

// Picks the better of the bracket midpoint and the secant point.
template <class F>
double polish_in_bracket(F& f, double lo, double flo, double hi, double fhi) {
    const double mid = 0.5 * (lo + hi);
    double best = mid;
    double fbest = std::abs(f(mid));
    if (flo != fhi) {
        const double sec = lo - flo * (hi - lo) / (fhi - flo);
        if (sec > lo && sec < hi) {
            const double fs = std::abs(f(sec));
            if (fs < fbest) {
                best = sec;
                fbest = fs;
            }
        }
    }
    if (std::abs(flo) < fbest) {
        best = lo;
        fbest = std::abs(flo);
    }
    if (std::abs(fhi) < fbest) best = hi;
    return best;
}

}  // namespace detail

/// Bisection root finder. Stops once the bracket is narrower than tol, then
/// returns whichever of midpoint, secant point and endpoints has the smallest
/// residual.
template <class F>
double find_root(F&& f, Bracket br, double tol) {
    detail::require(tol > 0.0, "find_root: tol must be positive");
    double lo = br.lo, hi = br.hi;
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) throw BracketError("find_root: no sign change on bracket");
    for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return detail::polish_in_bracket(f, lo, flo, hi, fhi);
}

/// Safeguarded Newton: Newton steps that leave the bracket (or shrink it too
/// slowly) are replaced by bisection.
template <class F, class DF>
double find_root(F&& f, DF&& df, Bracket br, double tol) {
    detail::require(tol > 0.0, "find_root: tol must be positive");
    double lo = br.lo, hi = br.hi;
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) throw BracketError("find_root: no sign change on bracket");
    // Orient so that f(lo) < 0.
    double a = flo < 0.0 ? lo : hi;
    double b = flo < 0.0 ? hi : lo;
    double x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    double fx = f(x), dfx = df(x);
    for (int it = 0; it < 500; ++it) {
        const bool newton_out = ((x - b) * dfx - fx) * ((x - a) * dfx - fx) > 0.0;
        const bool too_slow = std::abs(2.0 * fx) > std::abs(dx_old * dfx);
        dx_old = dx;
        if (newton_out || too_slow || dfx == 0.0) {
            dx = 0.5 * (b - a);
            x = a + dx;
        } else {
            dx = fx / dfx;
            x -= dx;
        }
        if (std::abs(dx) <= tol * 0.5) {
            fx = f(x);
            break;
        }
        fx = f(x);
        dfx = df(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) a = x;
        else b = x;
    }
    return x;
}

}  // namespace kepseries
