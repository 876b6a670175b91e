#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "multiplierlab/certificate.hpp"
#include "multiplierlab/classify.hpp"
#include "multiplierlab/dyadic.hpp"
#include "multiplierlab/kernels.hpp"
#include "multiplierlab/rate_sequence.hpp"
#include "multiplierlab/sequence.hpp"
#include "multiplierlab/series.hpp"

namespace mlab {

namespace detail {

// Finite-prefix stand-in for "c_n -> infinity": the suffix minimum at the
// three-quarter mark must clear twice the global minimum (and exceed it by 1).
inline bool trend_to_infinity(std::span<const double> terms) {
    if (terms.size() < 8) return false;
    std::vector<double> suffix_min(terms.size());
    double run = std::numeric_limits<double>::infinity();
    for (std::size_t i = terms.size(); i-- > 0;) {
        run = std::min(run, terms[i]);
        suffix_min[i] = run;
    }
    double lo = suffix_min[0];
    double late = suffix_min[(terms.size() * 3) / 4];
    return late >= std::max(2.0 * lo, lo + 1.0);
}

// Evidence that the dyadic ratios |A_k|/a^{kd} are unbounded: the max ratio on
// the sorted lower half must grow by the classify evidence factor.
inline bool ratio_evidence_unbounded(const MultiplierSequence& seq, double a) {
    std::vector<double> sorted = sorted_view(seq);
    std::vector<double> half(sorted.begin(),
                             sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() + 1) / 2));
    double full = detail::profile_of_span(sorted, a, seq.dim).max_ratio();
    double half_ratio = detail::profile_of_span(half, a, seq.dim).max_ratio();
    return full >= kEvidenceGrowthFactor * half_ratio;
}

}  // namespace detail

struct DivergenceBuild {
    RadialSeriesFunction fn;  // profile in rho = |x|; lift_power = 1
    Theorem3Certificate cert;
};

/**
 * Divergence construction: from a prefix whose dyadic ratios grow without
 * bound, produce an integrable f > 0 with sum_n f(c_n x) = infinity for every
 * x (witnessed on the prefix by divergence_lower_bound).
 *
 * Blocks A_k = {n : 2^k <= c_n < 2^{k+1}}; greedily select pairwise distinct
 * k_1, k_2, ... (ascending) with l_{k_i} >= i; put r = 1/(i^2 |A_{k_i}|) on
 * block i and f(x) = sum over selected-block members m of (r / c_m^d) g(x/c_m)
 * with g(x) = 1/(1 + |x|^{d+1}).  Terms sharing a scale are aggregated.
 *
 * Sequences that do not trend to infinity take the fallback branch: f = g
 * itself (strictly positive, so sum_n f(c_n x) diverges along the bounded
 * subsequence); certificate tagged accordingly.
 */
inline DivergenceBuild build_divergence_function(const MultiplierSequence& seq,
                                                 std::int64_t prefix_n = 0) {
    if (prefix_n <= 0 || prefix_n > seq.size()) prefix_n = seq.size();
    std::span<const double> prefix(seq.terms.data(), static_cast<std::size_t>(prefix_n));
    int d = seq.dim;

    DivergenceBuild out;
    out.cert.dim = d;
    out.cert.base = 2.0;
    out.cert.prefix_n = prefix_n;
    out.cert.seq_family = seq.family;
    BumpKernel g = BumpKernel::rational(static_cast<double>(d) + 1.0);
    // integral of g over R^d: S_d * int_0^inf rho^{d-1}/(1+rho^{d+1}) drho
    {
        double q = static_cast<double>(d) + 1.0;
        double s = static_cast<double>(d);
        double radial = (std::numbers::pi / q) / std::sin(std::numbers::pi * s / q);
        double sphere = 2.0 * std::pow(std::numbers::pi, s / 2.0) / std::tgamma(s / 2.0);
        out.cert.kernel_mass_ambient = sphere * radial;
    }
    out.fn.dim = d;
    out.fn.lift_power = 1;

    if (!detail::trend_to_infinity(prefix)) {
        out.cert.fallback = true;
        out.fn.base = SeriesTerm{1.0, 1.0, 0.0, g};
        out.fn.finalize();
        return out;
    }

    MultiplierSequence pref(std::vector<double>(prefix.begin(), prefix.end()), d);
    if (!detail::ratio_evidence_unbounded(pref, 2.0))
        throw BuildError(
            "divergence build: dyadic ratios |A_k|/2^{kd} stay bounded on this prefix, so the "
            "sequence shows no sign of violating the boundedness criterion and no divergent "
            "integrable function exists for it");

    DyadicProfile profile = dyadic_profile(pref, 2.0);
    int i = 1;
    for (const auto& [k, block] : profile.blocks) {
        if (block.block_sum < static_cast<double>(i)) continue;
        Theorem3Selection sel;
        sel.i = i;
        sel.k = k;
        sel.count = static_cast<std::int64_t>(block.indices.size());
        sel.block_sum = block.block_sum;
        sel.r = 1.0 / (static_cast<double>(i) * i * static_cast<double>(sel.count));
        double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
        for (std::int64_t n : block.indices) {
            double c = pref.terms[static_cast<std::size_t>(n - 1)];
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
        sel.c_min = cmin;
        sel.c_max = cmax;
        sel.max_index = block.indices.back();
        out.cert.selections.push_back(sel);
        ++i;
    }
    if (out.cert.selections.size() < 3)
        throw BuildError("divergence build: prefix too short, only " +
                         std::to_string(out.cert.selections.size()) +
                         " blocks reach l_k >= i (need at least 3)");

    // one aggregated series term per distinct scale within each selected block
    KahanSum r_sum, coeff_sum, witness, harmonic;
    for (auto& sel : out.cert.selections) {
        const DyadicBlock& block = profile.blocks.at(sel.k);
        std::map<double, double> by_scale;  // c value -> summed coefficient
        KahanSum term_weight;
        for (std::int64_t n : block.indices) {
            double c = pref.terms[static_cast<std::size_t>(n - 1)];
            double w = sel.r * inv_pow(c, d);
            by_scale[c] += w;
            term_weight.add(w);
            r_sum.add(sel.r);
            coeff_sum.add(w);
        }
        sel.term_weight = term_weight.value();
        witness.add(sel.r * static_cast<double>(sel.count) * sel.block_sum);
        harmonic.add(1.0 / static_cast<double>(sel.i));
        for (const auto& [c, w] : by_scale) out.fn.terms.push_back(SeriesTerm{w, c, 0.0, g});
    }
    out.cert.r_sum = r_sum.value();
    out.cert.coeff_sum = coeff_sum.value();
    out.cert.witness_sum = witness.value();
    out.cert.harmonic_floor = harmonic.value();
    out.fn.finalize();
    return out;
}

struct RateBuild {
    RadialSeriesFunction fn;  // profile f~ on [0, inf); lift_power = dim
    Theorem6Certificate cert;
};

// The fixed head bump h: plateau [0,1], unit ramps, support [-1,2];
// mass 2 over R and 3/2 over [0, inf).
inline BumpKernel rate_head_kernel() { return BumpKernel::trapezoid(0.0, 1.0, 1.0, 1.0); }

/**
 * Rate counterexample: integrable f~ >= 0 with limsup_n a_n f~(n x) = infinity
 * for every x >= 0 (lifted to R^d through |x|^d).
 *
 * f~ = h + sum_{l=1..k_max} (1/l^3) h(y/l - t_l); each witness k > x places
 * n_k = ceil(k t_k / x) on the plateau of term k, so a_{n_k} f~(n_k x) >= k.
 */
inline RateBuild build_rate_counterexample(const RateSequence& rate, int d, int k_max = 20) {
    if (d < 1) throw std::invalid_argument("rate build: d must be >= 1");
    if (k_max < 1) throw std::invalid_argument("rate build: k_max must be >= 1");
    RateBuild out;
    out.cert.dim = d;
    out.cert.k_max = k_max;
    out.cert.rate = rate;

    BumpKernel h = rate_head_kernel();
    out.cert.h_mass_full = h.mass();
    out.cert.h_mass_halfline = h.area_right_of(0.0);

    out.fn.dim = d;
    out.fn.lift_power = d;
    out.fn.base = SeriesTerm{1.0, 1.0, 0.0, h};
    for (int l = 1; l <= k_max; ++l) {
        double t_l = rate.threshold(l);
        out.cert.thresholds.push_back(t_l);
        out.fn.terms.push_back(
            SeriesTerm{1.0 / (static_cast<double>(l) * l * l), static_cast<double>(l), t_l, h});
    }

    double lmax = static_cast<double>(k_max);
    out.fn.tail.sup_bound = 1.0 / (2.0 * lmax * lmax);  // sum_{l>L} 1/l^3 <= 1/(2L^2)
    out.fn.tail.integral_bound = out.cert.h_mass_full / lmax;  // sum_{l>L} (mass h)/l^2 <= 2/L
    // unmaterialized term l starts at l (t_l - wl); thresholds are nondecreasing
    double t_next;
    try {
        t_next = rate.threshold(k_max + 1);
    } catch (const BuildError&) {
        t_next = out.cert.thresholds.back();
    }
    out.fn.tail.support_start = (lmax + 1.0) * (t_next + h.support_lo());
    out.fn.finalize();
    return out;
}

struct Lemma8Stage {
    double T = 0.0;
    std::int64_t N = 0;
    std::vector<double> b;                    // b_{M+1} .. b_N
    std::vector<std::int64_t> block_indices;  // A_K, ascending (1-based)
    RadialSeriesFunction g;                   // the single trapezoid bump
    Lemma8Record record;
};

/**
 * One perturbation stage on a transformed sequence (d = 1 semantics).
 *
 * Picks the smallest block K with
 *   (1) A_K nonempty and plateau measure a^{K+l} (1 - a^{-1/|A_K|}) < eps/2,
 *   (2) a^{K+l-1} > S,
 *   (3) a^K > c_n for every n <= M,
 * sets N = max A_K, b_n = c_n off the block, and distributes
 * {a^{K + j/|A_K|} : j = 0..|A_K|-1} over the block, largest value to the
 * smallest index.  g is the trapezoid with plateau
 * [a^{K+l-1/|A_K|}, a^{K+l}] and ramp width min(eps/4, (plateau_lo - S)/2, 1).
 *
 * Postconditions: 1/a <= b_n/c_n <= a on (M, N]; area of g < eps; g = 0
 * outside [S, T]; and for every x in [a^{l-1}, a^l] some n in A_K puts b_n x
 * on the plateau (covering identity), so max_n g(b_n x) = 1.
 */
inline Lemma8Stage lemma8_stage(std::span<const double> c, double a, double eps, double S, int l,
                                std::int64_t M, int stage_index = 0) {
    if (!(a > 1.0)) throw std::invalid_argument("stage: a must be > 1");
    if (!(eps > 0.0)) throw std::invalid_argument("stage: eps must be > 0");
    if (!(S > 0.0)) throw std::invalid_argument("stage: S must be > 0");
    if (M < 0 || M >= static_cast<std::int64_t>(c.size()))
        throw std::invalid_argument("stage: need 0 <= M < stored length");
    for (double v : c)
        if (!(v > 0.0)) throw std::invalid_argument("stage: sequence terms must be > 0");

    double prefix_max = 0.0;
    for (std::int64_t n = 1; n <= M; ++n) prefix_max = std::max(prefix_max, c[static_cast<std::size_t>(n - 1)]);

    DyadicProfile profile = detail::profile_of_span(c, a, 1);
    const DyadicBlock* chosen = nullptr;
    int K = 0;
    double plateau_lo = 0.0, plateau_hi = 0.0, measure = 0.0, w = 0.0;
    for (const auto& [k, block] : profile.blocks) {
        if (block.indices.empty()) continue;
        if (!(std::pow(a, static_cast<double>(k + l - 1)) > S)) continue;
        if (!(std::pow(a, static_cast<double>(k)) > prefix_max)) continue;
        double cnt = static_cast<double>(block.indices.size());
        double hi = std::pow(a, static_cast<double>(k + l));
        double m = hi * (1.0 - std::pow(a, -1.0 / cnt));
        if (!(m < eps / 2.0)) continue;
        double lo = std::pow(a, static_cast<double>(k + l) - 1.0 / cnt);
        double ramp = std::min({eps / 4.0, (lo - S) / 2.0, 1.0});
        if (!(ramp > 0.0)) continue;
        chosen = &block;
        K = k;
        plateau_lo = lo;
        plateau_hi = hi;
        measure = m;
        w = ramp;
        break;
    }
    if (!chosen)
        throw BuildError("stage " + std::to_string(stage_index) +
                         ": prefix exhausted, no stored block satisfies the plateau constraints "
                         "(eps = " + std::to_string(eps) + ", S = " + std::to_string(S) +
                         ", l = " + std::to_string(l) + ", M = " + std::to_string(M) + ")");

    Lemma8Stage out;
    out.block_indices = chosen->indices;
    out.N = chosen->indices.back();
    out.T = plateau_hi + w;

    out.b.resize(static_cast<std::size_t>(out.N - M));
    for (std::int64_t n = M + 1; n <= out.N; ++n)
        out.b[static_cast<std::size_t>(n - M - 1)] = c[static_cast<std::size_t>(n - 1)];
    const auto cnt = static_cast<double>(chosen->indices.size());
    for (std::size_t pos = 0; pos < chosen->indices.size(); ++pos) {
        // largest value (j = |A|-1) to the smallest index
        double j = cnt - 1.0 - static_cast<double>(pos);
        double bval = std::pow(a, static_cast<double>(K) + j / cnt);
        out.b[static_cast<std::size_t>(chosen->indices[pos] - M - 1)] = bval;
    }

    out.g.dim = 1;
    out.g.lift_power = 1;
    out.g.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::trapezoid(plateau_lo, plateau_hi, w, w)};
    out.g.finalize();

    out.record = Lemma8Record{stage_index, a,  l, eps, S, out.T, M, out.N, K,
                              static_cast<std::int64_t>(chosen->indices.size()),
                              plateau_lo, plateau_hi, measure, w, measure + w};
    return out;
}

struct StageScheduleEntry {
    double a = 2.0;
    int l = 0;
};

// a_i = 1 + 1/k and l_i = i - ((k+1)^3 + k^3 - 1)/2 for k^3 <= i < (k+1)^3;
// over one k the intervals [a_i^{l_i - 1}, a_i^{l_i}] cover [2^{-k}, 2^k].
inline StageScheduleEntry stage_schedule(int i) {
    if (i < 1) throw std::invalid_argument("schedule: stage index must be >= 1");
    int k = static_cast<int>(std::floor(std::cbrt(static_cast<double>(i))));
    while (static_cast<long long>(k) * k * k > i) --k;
    while (static_cast<long long>(k + 1) * (k + 1) * (k + 1) <= i) ++k;
    long long kk = k, k1 = k + 1;
    long long offset = (k1 * k1 * k1 + kk * kk * kk - 1) / 2;
    return StageScheduleEntry{1.0 + 1.0 / static_cast<double>(k), i - static_cast<int>(offset)};
}

struct StagedBuild {
    std::vector<double> b_transformed;  // perturbation of c~ = c^d (length N_last)
    std::vector<double> b;              // b_n = b~_n^{1/d}
    RadialSeriesFunction profile;       // f~ on [0, inf); lift_power = 1
    RadialSeriesFunction lifted;        // same series, lift_power = dim
    Theorem4Certificate cert;
    std::vector<std::vector<std::int64_t>> stage_blocks;  // A_K per stage
};

/**
 * Staged perturbation: b with 1/a_i <= b~_n/c~_n <= a_i per stage and an
 * integrable f~ = h + sum_i 2^i g_i (h = 1/(1+y^2)) such that
 * sum_n f~(b~_n x) = infinity for every x > 0 (and f~(0) > 0 handles x = 0).
 *
 * Stage i runs lemma8_stage with (a_i, l_i) from stage_schedule, eps_i = 4^-i,
 * S_1 = 1, S_{i+1} = T_i + 1, M_1 = 0, M_{i+1} = N_i.  Supports of the g_i are
 * disjoint, so the integral stays below int h + sum_i 2^i eps_i.
 */
inline StagedBuild build_perturbed_counterexample(const MultiplierSequence& seq, int stages) {
    if (stages < 0) throw std::invalid_argument("staged build: stage count must be >= 0");
    int d = seq.dim;
    StagedBuild out;
    out.cert.dim = d;
    out.cert.stages_requested = stages;
    out.cert.seq_family = seq.family;
    out.cert.prefix_n = seq.size();
    out.cert.h_weight = 1.0;

    if (!detail::trend_to_infinity(seq.terms)) {
        out.cert.fallback = true;
        out.b = seq.terms;
        out.b_transformed.resize(seq.terms.size());
        for (std::size_t i = 0; i < seq.terms.size(); ++i)
            out.b_transformed[i] = std::pow(seq.terms[i], static_cast<double>(d));
        out.profile.dim = d;
        out.profile.lift_power = 1;
        out.profile.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::rational(2.0)};
        out.profile.finalize();
        out.lifted = out.profile;
        out.lifted.lift_power = d;
        out.lifted.finalize();
        return out;
    }
    if (!detail::ratio_evidence_unbounded(seq, 2.0))
        throw BuildError(
            "staged build: dyadic ratios |A_k|/2^{kd} stay bounded on this prefix; such a "
            "sequence admits no blow-up perturbation within ratio a of the original");

    std::vector<double> ctilde(seq.terms.size());
    for (std::size_t i = 0; i < seq.terms.size(); ++i)
        ctilde[i] = std::pow(seq.terms[i], static_cast<double>(d));

    out.b_transformed = ctilde;
    out.profile.dim = d;
    out.profile.lift_power = 1;
    out.profile.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::rational(2.0)};

    double S = 1.0;
    std::int64_t M = 0;
    KahanSum budget;
    for (int i = 1; i <= stages; ++i) {
        StageScheduleEntry sched = stage_schedule(i);
        double eps = std::pow(4.0, -static_cast<double>(i));
        Lemma8Stage st = lemma8_stage(ctilde, sched.a, eps, S, sched.l, M, i);
        std::copy(st.b.begin(), st.b.end(), out.b_transformed.begin() + M);
        out.stage_blocks.push_back(std::move(st.block_indices));
        out.profile.terms.push_back(SeriesTerm{std::pow(2.0, static_cast<double>(i)), 1.0, 0.0,
                                               st.g.base->kernel});
        budget.add(std::pow(2.0, static_cast<double>(i)) * eps);
        out.cert.stages.push_back(st.record);
        S = st.T + 1.0;
        M = st.N;
    }
    out.cert.integral_budget = budget.value();
    // unmaterialized stages live beyond the last T; their integrals add at most
    // sum_{i > stages} 2^i eps_i = 2^-stages.
    out.profile.tail.sup_bound = stages > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    out.profile.tail.integral_bound = std::pow(2.0, -static_cast<double>(stages));
    out.profile.tail.support_start = S;
    out.profile.finalize();

    out.lifted = out.profile;
    out.lifted.lift_power = d;
    out.lifted.finalize();

    out.b.resize(out.b_transformed.size());
    for (std::size_t i = 0; i < out.b.size(); ++i)
        out.b[i] = std::pow(out.b_transformed[i], 1.0 / static_cast<double>(d));
    return out;
}

}  // namespace mlab
