#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "multiplierlab/util.hpp"

namespace mlab {

/**
 * Closed-form generators for multiplier sequences.
 *
 * power:      c_n = n^p
 * log:        c_n = log(n+1)
 * blocks:     ceil(count_base^k / count_div) copies of value_base^k, k = 0,1,2,...
 * power_sin:  c_n = n^p + sin(n)
 *
 * `ceiled` composes the generator with the ceiling map (the image of
 * improve_sequence keeps its tag through this flag).
 */
enum class FamilyKind { power, logarithmic, blocks, power_sin };

struct Family {
    FamilyKind kind = FamilyKind::power;
    double p = 1.0;
    double value_base = 2.0;
    double count_base = 4.0;
    double count_div = 1.0;
    bool ceiled = false;

    static Family power(double p) { return Family{FamilyKind::power, p}; }
    static Family logarithmic() { return Family{FamilyKind::logarithmic}; }
    static Family power_sin(double p) { return Family{FamilyKind::power_sin, p}; }
    static Family blocks(double value_base, double count_base, double count_div = 1.0) {
        Family f{FamilyKind::blocks};
        f.value_base = value_base;
        f.count_base = count_base;
        f.count_div = count_div;
        return f;
    }

    void validate() const {
        switch (kind) {
            case FamilyKind::power:
            case FamilyKind::power_sin:
                if (!(p > 0.0)) throw std::invalid_argument("family: exponent p must be > 0");
                break;
            case FamilyKind::logarithmic:
                break;
            case FamilyKind::blocks:
                if (!(value_base > 1.0)) throw std::invalid_argument("family: value_base must be > 1");
                if (!(count_base > 1.0)) throw std::invalid_argument("family: count_base must be > 1");
                if (!(count_div >= 1.0)) throw std::invalid_argument("family: count_div must be >= 1");
                break;
        }
    }

    // n is 1-based.
    double generate(std::int64_t n) const {
        double raw;
        switch (kind) {
            case FamilyKind::power:
                raw = std::pow(static_cast<double>(n), p);
                break;
            case FamilyKind::logarithmic:
                raw = std::log(static_cast<double>(n) + 1.0);
                break;
            case FamilyKind::power_sin:
                raw = std::pow(static_cast<double>(n), p) + std::sin(static_cast<double>(n));
                break;
            case FamilyKind::blocks: {
                std::int64_t cum = 0;
                int k = 0;
                for (;;) {
                    cum += block_count(k);
                    if (n <= cum) break;
                    ++k;
                    if (k > 4000) throw std::invalid_argument("family: blocks index overflow");
                }
                raw = std::pow(value_base, static_cast<double>(k));
                break;
            }
            default:
                throw std::invalid_argument("family: unknown kind");
        }
        return ceiled ? std::ceil(raw) : raw;
    }

    std::int64_t block_count(int k) const {
        return static_cast<std::int64_t>(
            std::ceil(std::pow(count_base, static_cast<double>(k)) / count_div));
    }

    // Closed-form boundedness of (n^{1/d} / c'_n) for the generated sequence,
    // when one exists.  Power-type generators: bounded iff p >= 1/d (a bounded
    // perturbation or a ceiling does not change the class, since c_n -> inf).
    std::optional<bool> analytic_bounded(int d) const {
        switch (kind) {
            case FamilyKind::power:
            case FamilyKind::power_sin:
                return p >= 1.0 / static_cast<double>(d);
            default:
                return std::nullopt;
        }
    }
};

/** A positive multiplier sequence prefix together with the exponent d >= 1. */
struct MultiplierSequence {
    std::vector<double> terms;  // c_1..c_N, all > 0
    int dim = 1;                // d
    std::optional<Family> family;

    MultiplierSequence() = default;

    MultiplierSequence(std::vector<double> t, int d, std::optional<Family> fam = std::nullopt)
        : terms(std::move(t)), dim(d), family(std::move(fam)) {
        validate();
    }

    static MultiplierSequence from_family(const Family& fam, std::int64_t count, int d) {
        fam.validate();
        if (count < 1) throw std::invalid_argument("sequence: need at least one term");
        std::vector<double> t;
        t.reserve(static_cast<std::size_t>(count));
        if (fam.kind == FamilyKind::blocks) {
            std::int64_t produced = 0;
            for (int k = 0; produced < count; ++k) {
                double v = std::pow(fam.value_base, static_cast<double>(k));
                if (fam.ceiled) v = std::ceil(v);
                std::int64_t m = fam.block_count(k);
                for (std::int64_t i = 0; i < m && produced < count; ++i, ++produced) t.push_back(v);
            }
        } else {
            for (std::int64_t n = 1; n <= count; ++n) t.push_back(fam.generate(n));
        }
        return MultiplierSequence(std::move(t), d, fam);
    }

    std::int64_t size() const { return static_cast<std::int64_t>(terms.size()); }

    void validate() const {
        if (terms.empty()) throw std::invalid_argument("sequence: need at least one term");
        if (dim < 1) throw std::invalid_argument("sequence: d must be a positive integer");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (!(terms[i] > 0.0) || !std::isfinite(terms[i]))
                throw std::invalid_argument("sequence: term " + std::to_string(i + 1) +
                                            " is not a positive finite number");
        }
        if (family) {
            family->validate();
            for (std::size_t i = 0; i < terms.size(); ++i) {
                double g = family->generate(static_cast<std::int64_t>(i) + 1);
                if (terms[i] != g)
                    throw std::invalid_argument("sequence: term " + std::to_string(i + 1) +
                                                " disagrees with the family generator");
            }
        }
    }
};

// Indices (1-based) of the nondecreasing rearrangement; ties keep original order.
inline std::vector<std::int64_t> sorted_indices(const MultiplierSequence& seq) {
    std::vector<std::int64_t> idx(seq.terms.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int64_t>(i) + 1;
    std::stable_sort(idx.begin(), idx.end(), [&](std::int64_t a, std::int64_t b) {
        return seq.terms[static_cast<std::size_t>(a - 1)] < seq.terms[static_cast<std::size_t>(b - 1)];
    });
    return idx;
}

inline std::vector<double> sorted_view(const MultiplierSequence& seq) {
    std::vector<double> v = seq.terms;
    std::sort(v.begin(), v.end());
    return v;
}

struct GrowthStatistic {
    double value;          // max over m of m^{1/d} / c'_m
    std::int64_t argmax;   // first m attaining the max
};

inline GrowthStatistic growth_statistic_detail(const std::vector<double>& sorted, int d) {
    GrowthStatistic r{0.0, 0};
    for (std::size_t m = 1; m <= sorted.size(); ++m) {
        double ratio = std::pow(static_cast<double>(m), 1.0 / d) / sorted[m - 1];
        if (ratio > r.value) {
            r.value = ratio;
            r.argmax = static_cast<std::int64_t>(m);
        }
    }
    return r;
}

inline double growth_statistic(const MultiplierSequence& seq) {
    return growth_statistic_detail(sorted_view(seq), seq.dim).value;
}

// b_n = ceil(c_n); integer-valued, b_n/c_n - 1 <= 1/c_n termwise.  A tagged
// generator survives through the `ceiled` flag so analytic classification of
// the image stays available.
inline MultiplierSequence improve_sequence(const MultiplierSequence& seq) {
    std::vector<double> b(seq.terms.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::ceil(seq.terms[i]);
    std::optional<Family> fam = seq.family;
    if (fam) fam->ceiled = true;
    return MultiplierSequence(std::move(b), seq.dim, fam);
}

}  // namespace mlab
