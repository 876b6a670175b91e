#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "multiplierlab/sequence.hpp"
#include "multiplierlab/util.hpp"

namespace mlab {

// Block key k with a^k <= c < a^{k+1}.  floor(log_a c) is only the seed; final
// membership is settled by direct comparison against computed powers, so values
// sitting on (or within rounding of) a block boundary land deterministically.
inline int block_key(double c, double a) {
    if (!(c > 0.0)) throw std::invalid_argument("block_key: value must be > 0");
    if (!(a > 1.0)) throw std::invalid_argument("block_key: base must be > 1");
    int k = static_cast<int>(std::floor(std::log(c) / std::log(a)));
    while (c < std::pow(a, static_cast<double>(k))) --k;
    while (c >= std::pow(a, static_cast<double>(k + 1))) ++k;
    return k;
}

struct DyadicBlock {
    std::vector<std::int64_t> indices;  // 1-based member indices, ascending
    double block_sum = 0.0;             // l_k = sum of c_n^{-d} over the block
    double ratio = 0.0;                 // |A_k| / a^{kd}
};

struct DyadicProfile {
    double base = 2.0;
    int dim = 1;
    std::map<int, DyadicBlock> blocks;

    double max_ratio() const {
        double m = 0.0;
        for (const auto& [k, b] : blocks) m = std::max(m, b.ratio);
        return m;
    }
    int argmax_ratio() const {
        double m = -1.0;
        int arg = 0;
        for (const auto& [k, b] : blocks)
            if (b.ratio > m) {
                m = b.ratio;
                arg = k;
            }
        return arg;
    }
};

namespace detail {

inline DyadicProfile profile_of_span(std::span<const double> terms, double a, int d) {
    if (!(a > 1.0)) throw std::invalid_argument("dyadic_profile: base must be > 1");
    DyadicProfile p;
    p.base = a;
    p.dim = d;
    for (std::size_t i = 0; i < terms.size(); ++i)
        p.blocks[block_key(terms[i], a)].indices.push_back(static_cast<std::int64_t>(i) + 1);
    for (auto& [k, b] : p.blocks) {
        std::vector<double> addends;
        addends.reserve(b.indices.size());
        for (std::int64_t n : b.indices) addends.push_back(inv_pow(terms[static_cast<std::size_t>(n - 1)], d));
        b.block_sum = canonical_sum(std::move(addends));
        b.ratio = static_cast<double>(b.indices.size()) / std::pow(a, static_cast<double>(k) * d);
    }
    return p;
}

}  // namespace detail

inline DyadicProfile dyadic_profile(const MultiplierSequence& seq, double a) {
    return detail::profile_of_span(seq.terms, a, seq.dim);
}

// sum of c_n^{-d} over the window t <= c_n < a*t.
inline double window_sum(const MultiplierSequence& seq, double t, double a) {
    if (!(t > 0.0)) throw std::invalid_argument("window_sum: t must be > 0");
    if (!(a > 1.0)) throw std::invalid_argument("window_sum: a must be > 1");
    std::vector<double> addends;
    for (double c : seq.terms)
        if (c >= t && c < a * t) addends.push_back(inv_pow(c, seq.dim));
    return canonical_sum(std::move(addends));
}

}  // namespace mlab
