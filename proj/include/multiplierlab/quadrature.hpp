#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated local error estimates
};

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// Depth-first interval bisection.  Each interval is accepted when the
// Richardson estimate |S2 - S1| / 15 meets its share of the tolerance; the
// extrapolated value S2 + (S2 - S1)/15 is accumulated.
template <class F>
void adapt(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
           int depth, QuadResult& out) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        out.value += left + right + delta / 15.0;
        out.error += std::fabs(delta) / 15.0;
        return;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: need b >= a");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tolerance must be > 0");
    QuadResult out;
    if (a == b) return out;
    double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    double whole = detail::simpson(a, b, fa, fm, fb);
    detail::adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, out);
    return out;
}

// Same, with interior breakpoints seeding the subdivision (useful when the
// integrand lives on widely separated scales).
template <class F>
QuadResult integrate_adaptive_split(F&& f, const std::vector<double>& knots, double abs_tol,
                                    int max_depth = 48) {
    if (knots.size() < 2) throw std::invalid_argument("integrate_adaptive_split: need >= 2 knots");
    QuadResult out;
    double per = abs_tol / static_cast<double>(knots.size() - 1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        QuadResult piece = integrate_adaptive(f, knots[i], knots[i + 1], per, max_depth);
        out.value += piece.value;
        out.error += piece.error;
    }
    return out;
}

}  // namespace mlab
