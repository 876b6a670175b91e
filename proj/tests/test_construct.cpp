#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "multiplierlab/construct.hpp"
#include "multiplierlab/integrate.hpp"

using namespace mlab;

TEST_CASE("divergence build on a packed block family") {
    // blocks: 4^k copies of 2^k; five complete blocks in 341 terms
    MultiplierSequence seq = MultiplierSequence::from_family(Family::blocks(2.0, 4.0), 341, 1);
    DivergenceBuild b = build_divergence_function(seq);
    REQUIRE_FALSE(b.cert.fallback);
    REQUIRE(b.cert.selections.size() == 5);
    for (std::size_t j = 0; j < b.cert.selections.size(); ++j) {
        const Theorem3Selection& s = b.cert.selections[j];
        int i = static_cast<int>(j) + 1;
        CHECK(s.i == i);
        CHECK(s.k == i - 1);                        // greedy: first block with l_k >= i
        CHECK(s.count == (1LL << (2 * (i - 1))));   // 4^{i-1} members
        CHECK(s.block_sum >= static_cast<double>(i));
        CHECK(s.r == 1.0 / (static_cast<double>(i) * i * static_cast<double>(s.count)));
        CHECK(s.c_max == s.c_min);                  // constant inside each block here
    }
    std::vector<double> inv_sq;
    for (int i = 1; i <= 5; ++i) inv_sq.push_back(1.0 / (static_cast<double>(i) * i));
    CHECK(b.cert.r_sum == Catch::Approx(canonical_sum(inv_sq)).epsilon(1e-14));
    CHECK(b.cert.r_sum <= std::numbers::pi * std::numbers::pi / 6 + 1e-12);
    CHECK(b.cert.harmonic_floor ==
          Catch::Approx(1.0 + 0.5 + 1.0 / 3.0 + 0.25 + 0.2).epsilon(1e-14));
    // one aggregated series term per selected block, rational(d+1) kernel
    REQUIRE(b.fn.terms.size() == 5);
    CHECK_FALSE(b.fn.base.has_value());
    CHECK(b.fn.value(0.0) == Catch::Approx(b.cert.r_sum).epsilon(1e-14));
    // termwise integral identity: int f = kappa * sum r
    IntegralResult amb = ambient_integral(b.fn);
    double rhs = b.cert.kernel_mass_ambient * b.cert.r_sum;
    CHECK(std::fabs(amb.value - rhs) <= 1e-6 * rhs + amb.error_bound);
}

TEST_CASE("divergence build rejects bounded-looking input") {
    CHECK_THROWS_AS(
        build_divergence_function(MultiplierSequence::from_family(Family::power(1.0), 500, 1)),
        BuildError);
}

TEST_CASE("divergence build falls back on sequences without a trend") {
    MultiplierSequence seq(std::vector<double>(64, 2.0), 1);
    DivergenceBuild b = build_divergence_function(seq);
    CHECK(b.cert.fallback);
    CHECK(b.cert.selections.empty());
    CHECK(b.fn.value(0.0) == 1.0);
    CHECK(certificate_tag(ConstructionCertificate{b.cert}) == "divergence-fallback");
}

TEST_CASE("divergence build needs at least three selections") {
    // ratio evidence is unbounded (a crowded block far out) yet only the
    // blocks at k = 0 and k = 5 reach l_k >= i
    std::vector<double> terms{1.0};
    for (int i = 0; i < 80; ++i) terms.push_back(32.0);
    CHECK_THROWS_AS(build_divergence_function(MultiplierSequence(terms, 1)), BuildError);
}

TEST_CASE("prefix restriction is honored and recorded") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::blocks(2.0, 4.0), 5461, 1);
    DivergenceBuild whole = build_divergence_function(seq);
    DivergenceBuild part = build_divergence_function(seq, 341);
    CHECK(part.cert.prefix_n == 341);
    CHECK(part.cert.selections.size() < whole.cert.selections.size());
    for (const auto& s : part.cert.selections) CHECK(s.max_index <= 341);
}

TEST_CASE("rate thresholds for the identity sequence are k^4") {
    RateBuild b = build_rate_counterexample(RateSequence::identity(), 1, 20);
    REQUIRE(b.cert.thresholds.size() == 20);
    for (int k = 1; k <= 20; ++k)
        CHECK(b.cert.thresholds[static_cast<std::size_t>(k - 1)] ==
              static_cast<double>(k) * k * k * k);
    CHECK(b.cert.h_mass_full == 2.0);
    CHECK(b.cert.h_mass_halfline == 1.5);

    // head + one full plateau at y = 1.5
    CHECK(b.fn.value(1.5) == 1.5);
    // integral: 1.5 from the head plus 2 sum_{l<=20} 1/l^2 from the bumps
    std::vector<double> bump;
    for (int l = 1; l <= 20; ++l) bump.push_back(2.0 / (static_cast<double>(l) * l));
    double expect = 1.5 + canonical_sum(std::move(bump));
    IntegralResult integ = integral_1d(b.fn);
    CHECK(std::fabs(integ.value - expect) <= integ.error_bound + 1e-12);
    // the target bound used downstream
    CHECK(integ.value <=
          b.cert.h_mass_full * (1.0 + std::numbers::pi * std::numbers::pi / 6) + 1e-6);
    // f~ dominates the head everywhere on its support
    for (double y = 0.0; y <= 2.0; y += 0.005) CHECK(b.fn.value(y) >= b.fn.base->value(y));
}

TEST_CASE("rate build validates its inputs") {
    CHECK_THROWS_AS(build_rate_counterexample(RateSequence::identity(), 1, 0),
                    std::invalid_argument);
    // a_n bounded above by 3: no index ever reaches level 4
    CHECK_THROWS_AS(
        build_rate_counterexample(RateSequence::from_values({1.0, 2.0, 3.0, 3.0, 3.0}, true), 1, 6),
        BuildError);
    // explicit values without the nondecreasing tail tag cannot certify thresholds
    CHECK_THROWS_AS(
        build_rate_counterexample(RateSequence::from_values({1.0, 5.0, 2.0}, false), 1, 3),
        BuildError);
}

TEST_CASE("rate build respects explicit thresholds") {
    RateBuild b =
        build_rate_counterexample(RateSequence::from_thresholds({1.0, 4.0, 9.0, 16.0}), 1, 4);
    REQUIRE(b.cert.thresholds.size() == 4);
    CHECK(b.cert.thresholds[2] == 9.0);
    CHECK(b.cert.k_max == 4);
}

TEST_CASE("within-block spread stays below the base on generic data") {
    std::vector<double> terms;
    for (int n = 1; n <= 3000; ++n)
        terms.push_back(std::sqrt(static_cast<double>(n)) * (1.0 + 0.3 * std::sin(3.0 * n)));
    DivergenceBuild b = build_divergence_function(MultiplierSequence(terms, 1));
    REQUIRE_FALSE(b.cert.fallback);
    REQUIRE(b.cert.selections.size() >= 3);
    for (const auto& s : b.cert.selections) {
        CHECK(s.c_max / s.c_min < 2.0);
        CHECK(s.block_sum >= static_cast<double>(s.i));
    }
}
