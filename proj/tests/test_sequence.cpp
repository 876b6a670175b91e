#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "multiplierlab/sequence.hpp"

using namespace mlab;

TEST_CASE("family generators produce the advertised closed forms") {
    Family pw = Family::power(2.0);
    CHECK(pw.generate(1) == 1.0);
    CHECK(pw.generate(5) == 25.0);

    Family lg = Family::logarithmic();
    CHECK(lg.generate(1) == std::log(2.0));
    CHECK(lg.generate(9) == std::log(10.0));

    Family ps = Family::power_sin(1.0);
    CHECK(ps.generate(3) == 3.0 + std::sin(3.0));

    Family bl = Family::blocks(2.0, 4.0);
    CHECK(bl.block_count(0) == 1);
    CHECK(bl.block_count(3) == 64);
    CHECK(bl.generate(1) == 1.0);   // block 0
    CHECK(bl.generate(2) == 2.0);   // block 1 starts at n = 2
    CHECK(bl.generate(5) == 2.0);   // block 1 ends at n = 5
    CHECK(bl.generate(6) == 4.0);   // block 2
}

TEST_CASE("from_family fills blocks exactly") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::blocks(2.0, 4.0), 21, 1);
    REQUIRE(seq.size() == 21);
    CHECK(seq.terms[0] == 1.0);
    for (int i = 1; i <= 4; ++i) CHECK(seq.terms[i] == 2.0);
    for (int i = 5; i <= 20; ++i) CHECK(seq.terms[i] == 4.0);
    CHECK_NOTHROW(seq.validate());
}

TEST_CASE("sequence validation rejects malformed input") {
    CHECK_THROWS_AS(MultiplierSequence({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(MultiplierSequence({1.0, 0.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(MultiplierSequence({-2.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(MultiplierSequence({std::nan("")}, 1), std::invalid_argument);
    CHECK_THROWS_AS(MultiplierSequence({1.0}, 0), std::invalid_argument);
    // a family tag must actually describe the stored terms
    CHECK_THROWS_AS(MultiplierSequence({2.0, 2.0}, 1, Family::power(1.0)),
                    std::invalid_argument);
    CHECK_NOTHROW(MultiplierSequence({1.0, 2.0}, 1, Family::power(1.0)));
}

TEST_CASE("sorted order is stable and 1-based") {
    MultiplierSequence seq({2.0, 1.0, 2.0}, 1);
    std::vector<std::int64_t> idx = sorted_indices(seq);
    REQUIRE(idx == std::vector<std::int64_t>{2, 1, 3});
    std::vector<double> v = sorted_view(seq);
    REQUIRE(v == std::vector<double>{1.0, 2.0, 2.0});
}

TEST_CASE("growth statistic matches a direct evaluation") {
    MultiplierSequence seq({4.0, 1.0, 2.0, 8.0}, 1);
    // sorted: 1 2 4 8 -> ratios 1, 1, 3/4, 1/2
    GrowthStatistic g = growth_statistic_detail(sorted_view(seq), 1);
    CHECK(g.value == 1.0);
    CHECK(g.argmax == 1);
    CHECK(growth_statistic(seq) == 1.0);
}

TEST_CASE("improve_sequence ceils termwise and keeps the family tag") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::power_sin(1.0), 200, 1);
    MultiplierSequence b = improve_sequence(seq);
    REQUIRE(b.size() == seq.size());
    for (std::size_t i = 0; i < b.terms.size(); ++i) {
        CHECK(b.terms[i] == std::floor(b.terms[i]));  // integer-valued
        CHECK(b.terms[i] >= seq.terms[i]);
        // b_n/c_n - 1 <= 1/c_n because b_n - c_n < 1
        CHECK(b.terms[i] / seq.terms[i] - 1.0 <= 1.0 / seq.terms[i]);
    }
    REQUIRE(b.family.has_value());
    CHECK(b.family->ceiled);
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("analytic boundedness is known exactly for power-type families") {
    CHECK(Family::power(1.0).analytic_bounded(1) == std::optional<bool>(true));
    CHECK(Family::power(0.5).analytic_bounded(1) == std::optional<bool>(false));
    CHECK(Family::power(0.5).analytic_bounded(2) == std::optional<bool>(true));
    CHECK(Family::power_sin(1.0).analytic_bounded(1) == std::optional<bool>(true));
    CHECK_FALSE(Family::logarithmic().analytic_bounded(1).has_value());
    CHECK_FALSE(Family::blocks(2.0, 4.0).analytic_bounded(1).has_value());
}
