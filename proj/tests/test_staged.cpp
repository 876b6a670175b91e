#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "multiplierlab/construct.hpp"
#include "multiplierlab/integrate.hpp"
#include "multiplierlab/probes.hpp"

using namespace mlab;

TEST_CASE("single-member stage on a one-term sequence") {
    std::vector<double> c{10.0};
    Lemma8Stage st = lemma8_stage(c, 2.0, 20.0, 1.0, 1, 0);
    const Lemma8Record& r = st.record;
    CHECK(r.K == 3);              // only the block [8,16) is populated
    CHECK(r.block_count == 1);
    CHECK(r.N == 1);
    CHECK(r.M == 0);
    REQUIRE(st.b.size() == 1);
    CHECK(st.b[0] == 8.0);        // a^{K + 0/1}
    CHECK(st.block_indices == std::vector<std::int64_t>{1});
    CHECK(r.plateau_lo == 8.0);   // a^{K+l-1}
    CHECK(r.plateau_hi == 16.0);  // a^{K+l}
    CHECK(r.plateau_measure == 8.0);
    CHECK(r.ramp_width == 1.0);   // min(eps/4, (lo-S)/2, 1)
    CHECK(st.T == 17.0);
    CHECK(r.g_area == 9.0);       // 8 plateau + two half-ramps
    CHECK(r.g_area < r.eps);
    // ratio sandwich: 8/10 within [1/2, 2]
    CHECK(st.b[0] / c[0] >= 1.0 / r.a);
    CHECK(st.b[0] / c[0] <= r.a);
    // support clears the barrier
    CHECK(st.g.base->support_lo() > r.S);
    CHECK(st.g.base->support_hi() <= st.T);
    GridCheck gc = lemma8_grid_check(st, 1000);
    CHECK(gc.failures == 0);
    CHECK(gc.min_attained == 1.0);
}

TEST_CASE("stage validation failures throw BuildError") {
    std::vector<double> c{10.0};
    // a barrier the plateau cannot clear within the stored prefix
    CHECK_THROWS_AS(lemma8_stage(c, 2.0, 20.0, 100.0, 1, 0), BuildError);
    // area budget too small for any populated block
    CHECK_THROWS_AS(lemma8_stage(c, 2.0, 1e-6, 1.0, 1, 0), BuildError);
    CHECK_THROWS_AS(lemma8_stage(c, 1.0, 20.0, 1.0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(lemma8_stage(c, 2.0, -1.0, 1.0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(lemma8_stage(c, 2.0, 20.0, 1.0, 1, 5), std::invalid_argument);
}

TEST_CASE("randomized stages satisfy the four postconditions") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::blocks(2.0, 8.0), 37449, 1);
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> eps_pick(0.1, 2.0);
    std::uniform_real_distribution<double> S_pick(0.5, 3.0);
    for (int trial = 0; trial < 12; ++trial) {
        double a = (trial % 2 == 0) ? 2.0 : 1.5;
        int l = trial % 4 - 1;  // -1 .. 2
        double eps = eps_pick(gen);
        double S = S_pick(gen);
        Lemma8Stage st = lemma8_stage(seq.terms, a, eps, S, l, 0);
        const Lemma8Record& r = st.record;
        INFO("trial " << trial << " a=" << a << " l=" << l << " eps=" << eps << " S=" << S);
        for (std::int64_t n = r.M + 1; n <= r.N; ++n) {
            double q = st.b[static_cast<std::size_t>(n - r.M - 1)] /
                       seq.terms[static_cast<std::size_t>(n - 1)];
            REQUIRE(q >= 1.0 / a);
            REQUIRE(q <= a);
        }
        REQUIRE(r.g_area < eps);
        REQUIRE(st.g.base->support_lo() > S);
        REQUIRE(st.g.base->support_hi() <= st.T);
        GridCheck gc = lemma8_grid_check(st, 1000);
        REQUIRE(gc.failures == 0);
        REQUIRE(gc.min_attained == 1.0);
    }
}

TEST_CASE("stage schedule walks the planned (a, l) ladder") {
    CHECK(stage_schedule(1).a == 2.0);
    CHECK(stage_schedule(1).l == -3);
    CHECK(stage_schedule(4).a == 2.0);
    CHECK(stage_schedule(4).l == 0);
    CHECK(stage_schedule(7).a == 2.0);
    CHECK(stage_schedule(7).l == 3);
    CHECK(stage_schedule(8).a == 1.5);
    CHECK(stage_schedule(8).l == -9);
    CHECK_THROWS_AS(stage_schedule(0), std::invalid_argument);
    // base decreases toward 1, so the covered ratio intervals refine
    CHECK(stage_schedule(50).a < stage_schedule(8).a);
}

TEST_CASE("schedule intervals cover [2^-k, 2^k]") {
    for (int k = 1; k <= 3; ++k) {
        for (double x : log_grid(std::pow(2.0, -k), std::pow(2.0, k), 2000)) {
            bool covered = false;
            for (int i = 1; i <= 60 && !covered; ++i) {
                StageScheduleEntry e = stage_schedule(i);
                double lo = std::pow(e.a, static_cast<double>(e.l - 1));
                double hi = std::pow(e.a, static_cast<double>(e.l));
                covered = x >= lo && x <= hi;
            }
            if (!covered) {
                INFO("x = " << x << " not covered for k = " << k);
                REQUIRE(covered);
            }
        }
    }
}

TEST_CASE("two-stage perturbed build on a fast block family") {
    MultiplierSequence seq =
        MultiplierSequence::from_family(Family::blocks(2.0, 8.0), 299593, 1);
    StagedBuild b = build_perturbed_counterexample(seq, 2);
    REQUIRE_FALSE(b.cert.fallback);
    REQUIRE(b.cert.stages.size() == 2);
    CHECK(b.cert.stages_requested == 2);
    CHECK(b.cert.integral_budget == 0.75);  // 2^1/4 + 2^2/16

    const Lemma8Record& r1 = b.cert.stages[0];
    const Lemma8Record& r2 = b.cert.stages[1];
    CHECK(r1.stage == 1);
    CHECK(r2.stage == 2);
    CHECK(r1.a == 2.0);
    CHECK(r1.l == -3);
    CHECK(r2.l == -2);
    CHECK(r2.S == r1.T + 1.0);  // stages chain through disjoint windows
    CHECK(r2.M == r1.N);

    // only block members move; everything else keeps c~; every ratio stays
    // inside the sandwich |b~/c~ - 1| <= a_i - 1 = 1
    std::vector<bool> touched(b.b_transformed.size(), false);
    for (const auto& blk : b.stage_blocks)
        for (std::int64_t n : blk) touched[static_cast<std::size_t>(n - 1)] = true;
    std::int64_t moved_off_block = 0, ratio_violations = 0;
    for (std::size_t i = 0; i < b.b_transformed.size(); ++i) {
        double ct = seq.terms[i];
        double bt = b.b_transformed[i];
        if (!touched[i] && bt != ct) ++moved_off_block;
        if (std::fabs(bt / ct - 1.0) > 1.0) ++ratio_violations;
    }
    CHECK(moved_off_block == 0);
    CHECK(ratio_violations == 0);
    // d = 1: the reported multipliers are the transformed values themselves
    CHECK(b.b == b.b_transformed);

    // profile terms carry weights 2^i on disjoint supports above the barriers
    REQUIRE(b.profile.terms.size() == 2);
    CHECK(b.profile.terms[0].weight == 2.0);
    CHECK(b.profile.terms[1].weight == 4.0);
    CHECK(b.profile.terms[0].support_lo() > r1.S);
    CHECK(b.profile.terms[0].support_hi() <= r1.T);
    CHECK(b.profile.terms[1].support_lo() > r2.S);
    CHECK(b.profile.terms[1].support_hi() <= r2.T);
    CHECK(b.profile.tail.integral_bound == 0.25);  // 2^{-stages}
    CHECK(std::isinf(b.profile.tail.sup_bound));
    CHECK(b.profile.tail.support_start == r2.T + 1.0);

    // integral stays within head + budget + tail allowance
    IntegralResult integ = integral_1d(b.profile);
    double head = b.cert.h_weight * std::numbers::pi / 2;
    CHECK(integ.value <= head + b.cert.integral_budget + 1e-6);

    // plateau grids hit the advertised weights exactly
    GridCheck g0 = staged_grid_check(b, 0, 1000);
    GridCheck g1 = staged_grid_check(b, 1, 1000);
    CHECK(g0.failures == 0);
    CHECK(g1.failures == 0);
    CHECK(g0.min_attained == 2.0);
    CHECK(g1.min_attained == 4.0);

    // probes: x inside stage windows finds witnesses, far outside does not
    StagedProbeReport p1 = blowup_probe_staged(b, 0.1);  // in [2^-4, 2^-3]
    CHECK(p1.any_qualifies);
    CHECK(p1.all_ok);
    StagedProbeReport p2 = blowup_probe_staged(b, 0.2);  // in [2^-3, 2^-2]
    CHECK(p2.any_qualifies);
    CHECK(p2.all_ok);
    StagedProbeReport p3 = blowup_probe_staged(b, 100.0);
    CHECK_FALSE(p3.any_qualifies);
    CHECK(p3.all_ok);  // vacuous, with a note
    CHECK_FALSE(p3.note.empty());
    StagedProbeReport p0 = blowup_probe_staged(b, 0.0);
    CHECK(p0.origin);
}

TEST_CASE("staged build falls back without a trend and lifts by d") {
    MultiplierSequence seq(std::vector<double>(64, 3.0), 2);
    StagedBuild b = build_perturbed_counterexample(seq, 3);
    CHECK(b.cert.fallback);
    CHECK(b.cert.stages.empty());
    CHECK(b.profile.value(0.0) == 1.0);
    CHECK(b.lifted.lift_power == 2);
    CHECK(b.b == seq.terms);
    StagedProbeReport p = blowup_probe_staged(b, 1.0);
    CHECK_FALSE(p.any_qualifies);
    CHECK_FALSE(p.note.empty());
}

TEST_CASE("staged build rejects bounded-looking input") {
    CHECK_THROWS_AS(build_perturbed_counterexample(
                        MultiplierSequence::from_family(Family::power(1.0), 600, 1), 2),
                    BuildError);
}

TEST_CASE("zero stages gives the bare head profile") {
    MultiplierSequence seq =
        MultiplierSequence::from_family(Family::blocks(2.0, 8.0), 4681, 1);
    StagedBuild b = build_perturbed_counterexample(seq, 0);
    CHECK(b.cert.stages.empty());
    CHECK_FALSE(b.cert.fallback);
    CHECK(b.profile.terms.empty());
    CHECK(b.b_transformed == seq.terms);  // d = 1, untouched
    CHECK(b.profile.tail.integral_bound == 1.0);  // 2^0
}