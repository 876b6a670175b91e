#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multiplierlab/construct.hpp"
#include "multiplierlab/sequence.hpp"
#include "multiplierlab/series.hpp"
#include "multiplierlab/util.hpp"

namespace mlab {

struct TrajectoryRow {
    std::int64_t n = 0;
    double c = 0.0;
    double term = 0.0;     // |f(c_n x)|
    double partial = 0.0;  // running compensated sum
};

/**
 * S_N(x) = sum_{n<=N} |f(c_n x)|, accumulated with compensation so the value
 * is monotone nondecreasing in N.  f is any callable on span<const double>.
 */
template <class F>
double partial_sum(F&& f, const MultiplierSequence& seq, std::span<const double> x, std::int64_t N,
                   std::vector<TrajectoryRow>* trajectory = nullptr) {
    if (N < 0 || N > seq.size())
        throw std::invalid_argument("partial_sum: need 0 <= N <= stored length");
    KahanSum acc;
    std::vector<double> scaled(x.size());
    for (std::int64_t n = 1; n <= N; ++n) {
        double c = seq.terms[static_cast<std::size_t>(n - 1)];
        for (std::size_t j = 0; j < x.size(); ++j) scaled[j] = c * x[j];
        double v = std::fabs(f(std::span<const double>(scaled)));
        acc.add(v);
        if (trajectory) trajectory->push_back({n, c, v, acc.value()});
    }
    return acc.value();
}

struct RateWitness {
    int k = 0;
    std::int64_t n = 0;    // n_k = ceil(k t_k / x), adjusted into the window
    double t_k = 0.0;
    double ratio = 0.0;    // n x / k, must lie in [t_k, t_k + 1]
    double f_value = 0.0;  // f~(n x)
    double a_value = 0.0;  // a_n (exact or certified lower bound)
    bool a_exact = true;
    double product = 0.0;  // a_n f~(n x), must be >= k
    bool ok = false;
};

struct RateProbeReport {
    double x = 0.0;
    int k_max = 0;
    bool origin = false;
    double f_at_origin = 0.0;
    std::vector<RateWitness> witnesses;
    bool all_ok = true;
    std::string note;
};

/**
 * Re-derives the blow-up witnesses of a rate build: for each k in (x, k_max]
 * the index n_k = ceil(k t_k / x) puts n_k x / k inside [t_k, t_k + 1], which
 * pins the argument onto the plateau of term k, so a_{n_k} f~(n_k x) >= k.
 * Both inequalities are re-evaluated exactly; any miss is a construction bug.
 */
inline RateProbeReport limsup_probe_rate(const RateBuild& build, double x, int k_max) {
    if (!(x >= 0.0)) throw std::invalid_argument("rate probe: x must be >= 0");
    if (k_max < 1 || k_max > build.cert.k_max)
        throw std::invalid_argument("rate probe: k_max must be within the certificate range 1.." +
                                    std::to_string(build.cert.k_max));
    RateProbeReport rep;
    rep.x = x;
    rep.k_max = k_max;
    if (x == 0.0) {
        rep.origin = true;
        rep.f_at_origin = build.fn.value(0.0);
        rep.all_ok = rep.f_at_origin >= 1.0;
        rep.note = "x = 0: f~(0) >= 1 and a_n -> infinity, so a_n f~(0) -> infinity";
        return rep;
    }
    int k_lo = static_cast<int>(std::floor(x)) + 1;
    if (k_lo > k_max) {
        rep.note = "no k in (x, k_max]; enlarge k_max to probe this x";
        return rep;
    }
    for (int k = k_lo; k <= k_max; ++k) {
        if (!(static_cast<double>(k) > x)) continue;
        RateWitness w;
        w.k = k;
        w.t_k = build.cert.thresholds[static_cast<std::size_t>(k - 1)];
        w.n = static_cast<std::int64_t>(std::ceil(static_cast<double>(k) * w.t_k / x));
        if (w.n < 1) w.n = 1;
        // the window [k t_k / x, k (t_k + 1) / x] is longer than 1, so an
        // integer adjustment of at most one step lands inside
        for (int adj = 0; adj < 2 && static_cast<double>(w.n) * x / k < w.t_k; ++adj) ++w.n;
        for (int adj = 0; adj < 2 && w.n > 1 && static_cast<double>(w.n - 1) * x / k >= w.t_k; ++adj)
            --w.n;
        w.ratio = static_cast<double>(w.n) * x / static_cast<double>(k);
        w.f_value = build.fn.value(static_cast<double>(w.n) * x);
        if (auto a = build.cert.rate.exact_value(w.n)) {
            w.a_value = *a;
        } else {
            w.a_value = build.cert.rate.lower_bound(w.n);
            w.a_exact = false;
        }
        w.product = w.a_value * w.f_value;
        w.ok = w.ratio >= w.t_k && w.ratio <= w.t_k + 1.0 && w.product >= static_cast<double>(k);
        rep.all_ok = rep.all_ok && w.ok;
        rep.witnesses.push_back(w);
    }
    return rep;
}

struct StagedStageProbe {
    int stage = 0;
    double a = 0.0;
    int l = 0;
    bool qualifies = false;  // x in [a^{l-1}, a^l]
    std::int64_t witness_n = 0;
    double b_value = 0.0;
    double arg = 0.0;       // b~_n x
    double g_value = 0.0;   // stage bump at the argument
    double attained = 0.0;  // 2^i g_i(b~_n x)
    double required = 0.0;
    bool ok = true;
};

struct StagedProbeReport {
    double x = 0.0;
    bool origin = false;
    double f_at_origin = 0.0;
    std::vector<StagedStageProbe> rows;
    bool any_qualifies = false;
    bool all_ok = true;
    std::string note;
};

namespace detail {

// witness scan for one stage: the index whose b value puts b~_n x on the
// plateau satisfies j ~ (l - log_a x) |A|; neighbours absorb rounding.
inline StagedStageProbe stage_witness(const Lemma8Record& rec,
                                      const std::vector<std::int64_t>& block,
                                      const std::vector<double>& b_transformed,
                                      const SeriesTerm& term, double x) {
    StagedStageProbe row;
    row.stage = rec.stage;
    row.a = rec.a;
    row.l = rec.l;
    double lo = std::pow(rec.a, static_cast<double>(rec.l - 1));
    double hi = std::pow(rec.a, static_cast<double>(rec.l));
    row.qualifies = x >= lo && x <= hi;
    if (!row.qualifies) return row;
    double cnt = static_cast<double>(rec.block_count);
    double js = std::floor((static_cast<double>(rec.l) - std::log(x) / std::log(rec.a)) * cnt);
    for (double j = js - 1.0; j <= js + 1.0; j += 1.0) {
        if (j < 0.0 || j >= cnt) continue;
        // largest b sits at the smallest index
        std::size_t pos = static_cast<std::size_t>(cnt - 1.0 - j);
        std::int64_t n = block[pos];
        double b = b_transformed[static_cast<std::size_t>(n - 1)];
        double g = term.kernel.value(b * x);
        if (g > row.g_value) {
            row.g_value = g;
            row.witness_n = n;
            row.b_value = b;
            row.arg = b * x;
        }
    }
    row.attained = term.weight * row.g_value;
    row.required = term.weight * (1.0 - 1e-9);  // documented fp slack at plateau edges
    row.ok = row.attained >= row.required;
    return row;
}

}  // namespace detail

/**
 * Checks the staged blow-up: every materialized stage whose interval
 * [a_i^{l_i-1}, a_i^{l_i}] contains x must reach 2^i g_i(b~_n x) >= 2^i at
 * some block index n.  An x outside every stored interval is not a failure,
 * only a sign that more stages would be needed.
 */
inline StagedProbeReport blowup_probe_staged(const StagedBuild& build, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("staged probe: x must be >= 0");
    StagedProbeReport rep;
    rep.x = x;
    if (build.cert.fallback) {
        rep.f_at_origin = build.profile.value(0.0);
        rep.all_ok = rep.f_at_origin > 0.0;
        rep.note = "bounded-subsequence branch: f~ is strictly positive, no stages to probe";
        return rep;
    }
    if (x == 0.0) {
        rep.origin = true;
        rep.f_at_origin = build.profile.value(0.0);
        rep.all_ok = rep.f_at_origin > 0.0;
        rep.note = "x = 0: f~(0) >= h(0) > 0";
        return rep;
    }
    for (std::size_t i = 0; i < build.cert.stages.size(); ++i) {
        StagedStageProbe row = detail::stage_witness(build.cert.stages[i], build.stage_blocks[i],
                                                     build.b_transformed, build.profile.terms[i],
                                                     x);
        if (row.qualifies) {
            rep.any_qualifies = true;
            rep.all_ok = rep.all_ok && row.ok;
        }
        rep.rows.push_back(row);
    }
    if (!rep.any_qualifies)
        rep.note = "x outside every materialized stage interval: insufficient stages, not a failure";
    return rep;
}

struct GridCheck {
    std::int64_t points = 0;
    std::int64_t failures = 0;
    double min_attained = std::numeric_limits<double>::infinity();
};

// log-spaced grid over [lo, hi] including both endpoints
inline std::vector<double> log_grid(double lo, double hi, std::int64_t count) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
    if (count < 2) throw std::invalid_argument("log_grid: need at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(count));
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::int64_t j = 0; j < count; ++j)
        g[static_cast<std::size_t>(j)] =
            std::exp(llo + (lhi - llo) * static_cast<double>(j) / static_cast<double>(count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

/** Plateau-hit property of a standalone stage on a log grid of [a^{l-1}, a^l]. */
inline GridCheck lemma8_grid_check(const Lemma8Stage& stage, std::int64_t grid_points = 1000) {
    const Lemma8Record& rec = stage.record;
    GridCheck out;
    SeriesTerm unit{1.0, 1.0, 0.0, stage.g.base->kernel};
    // stage.b is the chunk (M, N]; rebase to absolute indexing for the scan
    std::vector<double> absolute(static_cast<std::size_t>(rec.N), 0.0);
    for (std::int64_t n = rec.M + 1; n <= rec.N; ++n)
        absolute[static_cast<std::size_t>(n - 1)] = stage.b[static_cast<std::size_t>(n - rec.M - 1)];
    for (double x : log_grid(std::pow(rec.a, static_cast<double>(rec.l - 1)),
                             std::pow(rec.a, static_cast<double>(rec.l)), grid_points)) {
        StagedStageProbe row = detail::stage_witness(rec, stage.block_indices, absolute, unit, x);
        ++out.points;
        if (!row.ok) ++out.failures;
        if (row.attained < out.min_attained) out.min_attained = row.attained;
    }
    return out;
}

/** Same scan for one materialized stage of a staged build. */
inline GridCheck staged_grid_check(const StagedBuild& build, std::size_t stage_index,
                                   std::int64_t grid_points = 1000) {
    if (stage_index >= build.cert.stages.size())
        throw std::invalid_argument("grid check: no such stage");
    const Lemma8Record& rec = build.cert.stages[stage_index];
    GridCheck out;
    for (double x : log_grid(std::pow(rec.a, static_cast<double>(rec.l - 1)),
                             std::pow(rec.a, static_cast<double>(rec.l)), grid_points)) {
        StagedStageProbe row =
            detail::stage_witness(rec, build.stage_blocks[stage_index], build.b_transformed,
                                  build.profile.terms[stage_index], x);
        ++out.points;
        if (!row.ok) ++out.failures;
        if (row.attained < out.min_attained) out.min_attained = row.attained;
    }
    return out;
}

struct DivergenceProbeReport {
    std::vector<double> x;
    double x_norm = 0.0;
    std::int64_t N = 0;
    double partial = 0.0;        // sum_{n<=N} f(c_n x)
    double kernel_at_2x = 0.0;   // g(2|x|)
    double bound = 0.0;          // g(2|x|) sum over covered selections of r |A| l
    double harmonic_part = 0.0;  // sum of 1/i over covered selections
    std::int64_t selections_used = 0;
    bool fallback = false;
    bool pass = false;
    std::string note;
};

/**
 * Compares the direct partial sum against the certified lower bound
 * g(2|x|) * sum_i r_i |A_i| l_i >= g(2|x|) * sum_i 1/i, restricted to the
 * selections whose block is fully inside the first N indices.
 */
inline DivergenceProbeReport divergence_lower_bound(const DivergenceBuild& build,
                                                    const MultiplierSequence& seq,
                                                    std::span<const double> x, std::int64_t N) {
    if (static_cast<int>(x.size()) != seq.dim)
        throw std::invalid_argument("divergence probe: x must have d coordinates");
    DivergenceProbeReport rep;
    rep.x.assign(x.begin(), x.end());
    rep.x_norm = euclidean_norm(x);
    rep.N = std::min<std::int64_t>(N, seq.size());
    rep.fallback = build.cert.fallback;
    rep.partial = partial_sum([&](std::span<const double> p) { return build.fn.ambient_value(p); },
                              seq, x, rep.N);
    if (rep.fallback) {
        rep.pass = rep.N == 0 || rep.partial > 0.0;
        rep.note = "subsequence-limit branch: f > 0 everywhere, partial sums grow without a "
                   "block-certified rate";
        return rep;
    }
    BumpKernel g = BumpKernel::rational(static_cast<double>(seq.dim) + 1.0);
    rep.kernel_at_2x = g.value(2.0 * rep.x_norm);
    KahanSum witness, harmonic;
    for (const auto& sel : build.cert.selections) {
        if (sel.max_index > rep.N) continue;
        witness.add(sel.r * static_cast<double>(sel.count) * sel.block_sum);
        harmonic.add(1.0 / static_cast<double>(sel.i));
        ++rep.selections_used;
    }
    rep.bound = rep.kernel_at_2x * witness.value();
    rep.harmonic_part = harmonic.value();
    rep.pass = rep.partial >= rep.bound - 1e-9 * std::max(1.0, rep.bound);
    return rep;
}

}  // namespace mlab
