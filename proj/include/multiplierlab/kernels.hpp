#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mlab {

/**
 * One-dimensional bump profiles used as series building blocks.
 *
 * rational:   y -> 1 / (1 + |y|^q), q > 1.  Strictly positive, sup = 1 at 0.
 * trapezoid:  1 on [p0, p1], linear ramps of widths wl / wr down to 0,
 *             zero outside [p0 - wl, p1 + wr].  Continuous, sup = 1.
 */
struct BumpKernel {
    enum class Kind { rational, trapezoid };

    Kind kind = Kind::rational;
    double q = 2.0;
    double p0 = 0.0, p1 = 0.0, wl = 1.0, wr = 1.0;

    static BumpKernel rational(double q) {
        if (!(q > 1.0)) throw std::invalid_argument("kernel: rational exponent q must be > 1");
        BumpKernel k;
        k.kind = Kind::rational;
        k.q = q;
        return k;
    }

    static BumpKernel trapezoid(double p0, double p1, double wl, double wr) {
        if (!(p0 >= 0.0) || !(p1 >= p0))
            throw std::invalid_argument("kernel: trapezoid needs 0 <= p0 <= p1");
        if (!(wl > 0.0) || !(wr > 0.0))
            throw std::invalid_argument("kernel: trapezoid ramp widths must be > 0");
        BumpKernel k;
        k.kind = Kind::trapezoid;
        k.p0 = p0;
        k.p1 = p1;
        k.wl = wl;
        k.wr = wr;
        return k;
    }

    double value(double y) const {
        if (kind == Kind::rational) return 1.0 / (1.0 + std::pow(std::fabs(y), q));
        if (y <= p0 - wl || y >= p1 + wr) return 0.0;
        if (y < p0) return (y - (p0 - wl)) / wl;
        if (y <= p1) return 1.0;
        return ((p1 + wr) - y) / wr;
    }

    double support_lo() const {
        return kind == Kind::rational ? -std::numeric_limits<double>::infinity() : p0 - wl;
    }
    double support_hi() const {
        return kind == Kind::rational ? std::numeric_limits<double>::infinity() : p1 + wr;
    }

    // integral over the whole line (trapezoid only).
    double mass() const {
        if (kind != Kind::trapezoid) throw std::logic_error("kernel: mass() needs a trapezoid");
        return (p1 - p0) + 0.5 * (wl + wr);
    }

    // integral over [t, inf) (trapezoid only), exact piecewise geometry.
    double area_right_of(double t) const {
        if (kind != Kind::trapezoid)
            throw std::logic_error("kernel: area_right_of() needs a trapezoid");
        double lo = p0 - wl, hi = p1 + wr;
        if (t <= lo) return mass();
        if (t >= hi) return 0.0;
        if (t >= p1) {
            double u = hi - t;  // remaining right-ramp base
            return 0.5 * u * u / wr;
        }
        double area = 0.5 * wr;            // full right ramp
        if (t <= p0) {
            area += p1 - std::max(t, p0);  // plateau (t <= p0 here)
            double u = t - lo;             // consumed left-ramp base
            area += 0.5 * wl - 0.5 * u * u / wl;
            return area;
        }
        return area + (p1 - t);            // cut inside the plateau
    }

    // integral of 1/(1+y^q) over [0, inf): (pi/q) / sin(pi/q).
    double half_line_mass() const {
        if (kind == Kind::rational) {
            double x = std::numbers::pi / q;
            return x / std::sin(x);
        }
        return area_right_of(0.0);
    }

    double sup() const { return 1.0; }

    // bound on |d/dy value(y)|.
    double slope_bound() const {
        if (kind == Kind::rational) return q;  // q y^{q-1}/(1+y^q)^2 <= q
        return std::max(1.0 / wl, 1.0 / wr);
    }
};

}  // namespace mlab
