#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "multiplierlab/kernels.hpp"
#include "multiplierlab/util.hpp"

namespace mlab {

/** One series term: y -> weight * kernel(y / scale - shift). */
struct SeriesTerm {
    double weight = 1.0;
    double scale = 1.0;
    double shift = 0.0;
    BumpKernel kernel;

    double value(double y) const { return weight * kernel.value(y / scale - shift); }

    // support in the y variable; infinite for rational kernels.
    double support_lo() const {
        if (kernel.kind == BumpKernel::Kind::rational)
            return -std::numeric_limits<double>::infinity();
        return scale * (shift + kernel.support_lo());
    }
    double support_hi() const {
        if (kernel.kind == BumpKernel::Kind::rational)
            return std::numeric_limits<double>::infinity();
        return scale * (shift + kernel.support_hi());
    }

    void validate() const {
        if (!(weight >= 0.0) || !std::isfinite(weight))
            throw std::invalid_argument("series: term weight must be finite and >= 0");
        if (!(scale > 0.0)) throw std::invalid_argument("series: term scale must be > 0");
        if (!std::isfinite(shift)) throw std::invalid_argument("series: term shift must be finite");
    }
};

/** Bounds on everything the stored terms do not represent. */
struct TailInfo {
    // bound on sum of w_m * sup(kernel_m) over unmaterialized terms (may be +inf
    // when the ideal series is only locally uniformly convergent).
    double sup_bound = 0.0;
    // bound on the [0,inf) integral of the unmaterialized remainder.
    double integral_bound = 0.0;
    // every unmaterialized term vanishes below this point.
    double support_start = std::numeric_limits<double>::infinity();
};

/**
 * f~(y) = base(y) + sum_m w_m kernel_m(y/s_m - tau_m) on [0, inf), plus the
 * lifting convention f(x) = f~(|x|^lift_power) on R^dim.
 *
 * Evaluation at y touches only the terms whose support contains y; compactly
 * supported terms are located through a support-interval search, so series with
 * many disjoint bumps evaluate in O(log #terms).
 */
struct RadialSeriesFunction {
    std::optional<SeriesTerm> base;  // scale 1, shift 0 by convention
    std::vector<SeriesTerm> terms;
    int dim = 1;
    int lift_power = 1;
    TailInfo tail;

    bool empty() const { return !base && terms.empty(); }

    void finalize() {
        if (base) base->validate();
        for (const auto& t : terms) t.validate();
        if (dim < 1) throw std::invalid_argument("series: dim must be >= 1");
        if (lift_power < 1) throw std::invalid_argument("series: lift power must be >= 1");
        global_.clear();
        compact_order_.clear();
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].kernel.kind == BumpKernel::Kind::rational)
                global_.push_back(i);
            else
                compact_order_.push_back(i);
        }
        std::sort(compact_order_.begin(), compact_order_.end(), [&](std::size_t a, std::size_t b) {
            return terms[a].support_lo() < terms[b].support_lo();
        });
        compact_lo_.resize(compact_order_.size());
        compact_hi_running_.resize(compact_order_.size());
        double run = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < compact_order_.size(); ++i) {
            compact_lo_[i] = terms[compact_order_[i]].support_lo();
            run = std::max(run, terms[compact_order_[i]].support_hi());
            compact_hi_running_[i] = run;
        }
    }

    double value(double y) const {
        if (global_.size() + compact_order_.size() != terms.size())
            throw std::logic_error("series: finalize() was not called after terms changed");
        double s = base ? base->value(y) : 0.0;
        for (std::size_t i : global_) s += terms[i].value(y);
        // candidates: support_lo <= y and running max of support_hi >= y
        auto ub = std::upper_bound(compact_lo_.begin(), compact_lo_.end(), y) - compact_lo_.begin();
        for (auto i = ub; i > 0; --i) {
            if (compact_hi_running_[static_cast<std::size_t>(i - 1)] < y) break;
            const SeriesTerm& t = terms[compact_order_[static_cast<std::size_t>(i - 1)]];
            if (t.support_hi() >= y) s += t.value(y);
        }
        return s;
    }

    double value_truncated(double y, std::size_t m) const {
        double s = base ? base->value(y) : 0.0;
        for (std::size_t i = 0; i < std::min(m, terms.size()); ++i) s += terms[i].value(y);
        return s;
    }

    // sup-norm bound on |value - value_truncated(.,m)| plus everything beyond
    // the stored terms; nonincreasing in m.
    double tail_bound(std::size_t m) const {
        KahanSum acc;
        for (std::size_t i = m; i < terms.size(); ++i) acc.add(terms[i].weight * terms[i].kernel.sup());
        return acc.value() + tail.sup_bound;
    }

    // true when no unmaterialized term can reach y, i.e. value(y) is the exact
    // ideal-series value apart from rounding.
    bool exact_at(double y) const { return y < tail.support_start; }

    double lipschitz_bound() const {
        double c = base ? base->weight * base->kernel.slope_bound() : 0.0;
        for (const auto& t : terms) c += t.weight * t.kernel.slope_bound() / t.scale;
        return c;
    }

    double ambient_value(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim)
            throw std::invalid_argument("series: ambient point must have dim coordinates");
        return value(std::pow(euclidean_norm(x), static_cast<double>(lift_power)));
    }

  private:
    std::vector<std::size_t> global_;
    std::vector<std::size_t> compact_order_;
    std::vector<double> compact_lo_;
    std::vector<double> compact_hi_running_;
};

/** Value-semantics evaluator x -> f~(|x|^d) on R^d. */
struct RadialLift {
    RadialSeriesFunction fn;
    int dim;
    double operator()(std::span<const double> x) const {
        return fn.value(std::pow(euclidean_norm(x), static_cast<double>(dim)));
    }
};

inline RadialLift radial_lift(const RadialSeriesFunction& fn, int d) {
    if (d < 1) throw std::invalid_argument("radial_lift: d must be >= 1");
    return RadialLift{fn, d};
}

}  // namespace mlab
