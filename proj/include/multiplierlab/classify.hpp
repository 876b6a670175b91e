#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "multiplierlab/dyadic.hpp"
#include "multiplierlab/sequence.hpp"
#include "multiplierlab/util.hpp"

namespace mlab {

enum class Verdict { analytic_bounded, analytic_unbounded, bounded_evidence, unbounded_evidence };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::analytic_bounded: return "analytic-bounded";
        case Verdict::analytic_unbounded: return "analytic-unbounded";
        case Verdict::bounded_evidence: return "bounded-evidence";
        case Verdict::unbounded_evidence: return "unbounded-evidence";
    }
    return "?";
}

struct CrossBoundCheck {
    std::string name;
    double lhs = 0.0;   // quantity that must not exceed rhs
    double rhs = 0.0;
    bool pass = false;  // lhs <= rhs up to 4 ulps
};

/**
 * Finite-prefix classification against the boundedness criterion for
 * (n^{1/d} / c'_n).  The three statistics are the quantitative forms of the
 * equivalent conditions:
 *
 *   growth_stat  L  = max_m m^{1/d} / c'_m                  (sorted permutation)
 *   max_ratio    M' = max_k |A_k| / a^{kd}                  (block counting)
 *   max_window   M  = max_t sum_{t <= c_n < at} c_n^{-d}    (window sums)
 *
 * and the cross bounds certify, exactly on the stored prefix,
 *   M' < (L a)^d,   M <= 2 M',   L <= (M / (1 - a^{-d}))^{1/d}.
 *
 * The window sup over all t > 0 is attained at some t = c_n, so probing the
 * distinct stored values (plus the block boundaries a^k) evaluates it exactly.
 */
struct ClassificationReport {
    double base = 2.0;
    int dim = 1;
    std::int64_t n = 0;
    std::string family = "";
    Verdict verdict = Verdict::bounded_evidence;

    double growth_stat = 0.0;
    std::int64_t growth_argmax_m = 0;
    double growth_stat_half = 0.0;
    double max_ratio = 0.0;
    int ratio_argmax_k = 0;
    double max_ratio_half = 0.0;
    double max_window = 0.0;
    double window_argmax_t = 0.0;
    std::int64_t window_probe_count = 0;

    CrossBoundCheck bound_i_iii;   // M' vs (La)^d
    CrossBoundCheck bound_iii_ii;  // M vs 2M'
    CrossBoundCheck bound_ii_i;    // L vs (M/(1-a^{-d}))^{1/d}

    double growth_factor = 0.0;  // evidence threshold used
};

namespace detail {

constexpr double kEvidenceGrowthFactor = 1.2;

struct WindowScan {
    double max_sum = 0.0;
    double argmax_t = 0.0;
    std::int64_t probes = 0;
};

// Max window sum over the probe set {a^k : block present} u {distinct c_n}.
// Each window is summed with ascending addends (descending values), which is
// the same canonical order window_sum() uses, so results agree bit for bit.
inline WindowScan max_window_scan(const std::vector<double>& sorted, int d, double a,
                                  const DyadicProfile& profile) {
    std::vector<double> probes;
    probes.reserve(sorted.size() + profile.blocks.size());
    for (const auto& [k, b] : profile.blocks) probes.push_back(std::pow(a, static_cast<double>(k)));
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (i == 0 || sorted[i] != sorted[i - 1]) probes.push_back(sorted[i]);
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

    std::vector<double> addends(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) addends[i] = inv_pow(sorted[i], d);

    WindowScan r;
    r.probes = static_cast<std::int64_t>(probes.size());
    for (double t : probes) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        auto hi = std::lower_bound(sorted.begin(), sorted.end(), a * t) - sorted.begin();
        KahanSum acc;
        for (auto i = hi; i > lo; --i) acc.add(addends[static_cast<std::size_t>(i - 1)]);
        if (acc.value() > r.max_sum) {
            r.max_sum = acc.value();
            r.argmax_t = t;
        }
    }
    return r;
}

}  // namespace detail

inline ClassificationReport classify(const MultiplierSequence& seq, double a = 2.0) {
    if (!(a > 1.0)) throw std::invalid_argument("classify: base must be > 1");
    ClassificationReport rep;
    rep.base = a;
    rep.dim = seq.dim;
    rep.n = seq.size();
    rep.growth_factor = detail::kEvidenceGrowthFactor;

    const std::vector<double> sorted = sorted_view(seq);
    GrowthStatistic g = growth_statistic_detail(sorted, seq.dim);
    rep.growth_stat = g.value;
    rep.growth_argmax_m = g.argmax;

    DyadicProfile profile = dyadic_profile(seq, a);
    rep.max_ratio = profile.max_ratio();
    rep.ratio_argmax_k = profile.argmax_ratio();

    detail::WindowScan win = detail::max_window_scan(sorted, seq.dim, a, profile);
    rep.max_window = win.max_sum;
    rep.window_argmax_t = win.argmax_t;
    rep.window_probe_count = win.probes;

    // Half statistics on the sorted lower half keep the report permutation
    // invariant; growth across halves is the unboundedness evidence.
    std::vector<double> half(sorted.begin(),
                             sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() + 1) / 2));
    rep.growth_stat_half = growth_statistic_detail(half, seq.dim).value;
    rep.max_ratio_half = detail::profile_of_span(half, a, seq.dim).max_ratio();

    double d = static_cast<double>(seq.dim);
    rep.bound_i_iii = {"block ratio vs (L a)^d", rep.max_ratio, std::pow(rep.growth_stat * a, d),
                       false};
    rep.bound_iii_ii = {"window sum vs 2 max ratio", rep.max_window, 2.0 * rep.max_ratio, false};
    rep.bound_ii_i = {"growth stat vs (M/(1-a^-d))^{1/d}", rep.growth_stat,
                      std::pow(rep.max_window / (1.0 - std::pow(a, -d)), 1.0 / d), false};
    for (CrossBoundCheck* c : {&rep.bound_i_iii, &rep.bound_iii_ii, &rep.bound_ii_i})
        c->pass = le_ulps(c->lhs, c->rhs, 4);

    std::optional<bool> analytic;
    if (seq.family) {
        analytic = seq.family->analytic_bounded(seq.dim);
        switch (seq.family->kind) {
            case FamilyKind::power: rep.family = "power"; break;
            case FamilyKind::logarithmic: rep.family = "log"; break;
            case FamilyKind::blocks: rep.family = "blocks"; break;
            case FamilyKind::power_sin: rep.family = "power_sin"; break;
        }
        if (seq.family->ceiled) rep.family = "ceil(" + rep.family + ")";
    }
    if (analytic) {
        rep.verdict = *analytic ? Verdict::analytic_bounded : Verdict::analytic_unbounded;
    } else {
        bool growing = rep.growth_stat >= detail::kEvidenceGrowthFactor * rep.growth_stat_half ||
                       rep.max_ratio >= detail::kEvidenceGrowthFactor * rep.max_ratio_half;
        rep.verdict = growing ? Verdict::unbounded_evidence : Verdict::bounded_evidence;
    }
    return rep;
}

// |{n : c_n < t}| <= t^d * M / (1 - a^{-d}) with M = max window sum; the
// counting bound behind the (ii) => (i') implication.
inline bool counting_bound_holds(const MultiplierSequence& seq, double a, double t,
                                 double max_window, int ulps = 4) {
    std::int64_t count = 0;
    for (double c : seq.terms)
        if (c < t) ++count;
    double d = static_cast<double>(seq.dim);
    double rhs = std::pow(t, d) * max_window / (1.0 - std::pow(a, -d));
    return le_ulps(static_cast<double>(count), rhs, ulps);
}

}  // namespace mlab
