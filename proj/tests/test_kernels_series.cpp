#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "multiplierlab/series.hpp"

using namespace mlab;

TEST_CASE("trapezoid kernel geometry") {
    BumpKernel k = BumpKernel::trapezoid(1.0, 3.0, 0.5, 1.0);
    CHECK(k.value(0.5) == 0.0);
    CHECK(k.value(0.75) == 0.5);
    CHECK(k.value(1.0) == 1.0);
    CHECK(k.value(2.0) == 1.0);
    CHECK(k.value(3.5) == 0.5);
    CHECK(k.value(4.0) == 0.0);
    CHECK(k.support_lo() == 0.5);
    CHECK(k.support_hi() == 4.0);
    CHECK(k.mass() == 2.0 + 0.75);
    CHECK(k.area_right_of(0.0) == k.mass());
    CHECK(k.area_right_of(1.0) == 2.0 + 0.5);
    CHECK(k.area_right_of(2.0) == 1.0 + 0.5);
    CHECK(k.area_right_of(3.5) == Catch::Approx(0.125).margin(1e-15));
    CHECK(k.area_right_of(5.0) == 0.0);
    CHECK(k.slope_bound() == 2.0);
    CHECK_THROWS_AS(BumpKernel::trapezoid(-1.0, 3.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BumpKernel::trapezoid(3.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BumpKernel::trapezoid(1.0, 3.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("rational kernel values and masses") {
    BumpKernel k = BumpKernel::rational(2.0);
    CHECK(k.value(0.0) == 1.0);
    CHECK(k.value(1.0) == 0.5);
    CHECK(k.value(-1.0) == 0.5);
    CHECK(k.value(2.0) == 0.2);
    // integral of 1/(1+y^2) on [0, inf) is pi/2
    CHECK(k.half_line_mass() == Catch::Approx(std::numbers::pi / 2).epsilon(1e-15));
    BumpKernel k4 = BumpKernel::rational(4.0);
    CHECK(k4.half_line_mass() ==
          Catch::Approx(std::numbers::pi / 4 / std::sin(std::numbers::pi / 4)).epsilon(1e-15));
    CHECK_THROWS_AS(BumpKernel::rational(1.0), std::invalid_argument);
    CHECK_THROWS_AS(k.mass(), std::logic_error);
}

TEST_CASE("series evaluation sums exactly the overlapping terms") {
    RadialSeriesFunction f;
    f.dim = 1;
    f.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::rational(2.0)};
    // bump on [8,16] via scale 8: plateau [1,1.5] of the kernel
    f.terms.push_back(SeriesTerm{2.0, 8.0, 0.0, BumpKernel::trapezoid(1.0, 1.5, 0.5, 0.5)});
    // shifted copy: y/4 - 10 in [0,1] plateau -> y in [40,44]
    f.terms.push_back(SeriesTerm{0.5, 4.0, 10.0, BumpKernel::trapezoid(0.0, 1.0, 0.25, 0.25)});
    f.finalize();

    CHECK(f.value(0.0) == 1.0);
    CHECK(f.value(10.0) == 1.0 / (1.0 + 100.0) + 2.0);   // inside first plateau
    CHECK(f.value(42.0) == 1.0 / (1.0 + 42.0 * 42.0) + 0.5);
    CHECK(f.value(30.0) == 1.0 / (1.0 + 900.0));         // between bumps
    CHECK(f.ambient_value(std::vector<double>{-10.0}) == f.value(10.0));
}

TEST_CASE("lift convention evaluates at |x|^lift") {
    RadialSeriesFunction f;
    f.dim = 2;
    f.lift_power = 2;
    f.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::rational(2.0)};
    f.finalize();
    // |(1,1)|^2 = 2 -> 1/(1+4)
    CHECK(f.ambient_value(std::vector<double>{1.0, 1.0}) == 0.2);
    CHECK_THROWS_AS(f.ambient_value(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("truncation error is controlled by the stored tail") {
    RadialSeriesFunction f;
    f.dim = 1;
    for (int l = 1; l <= 50; ++l)
        f.terms.push_back(SeriesTerm{1.0 / (l * l), 1.0, 2.0 * l,
                                     BumpKernel::trapezoid(0.0, 1.0, 0.5, 0.5)});
    f.finalize();
    double y = 10.25;  // inside bump l = 5
    CHECK(f.value(y) > 0.0);
    // value() equals the sum over all stored terms of their contribution
    double direct = 0.0;
    for (const auto& t : f.terms) direct += t.value(y);
    CHECK(f.value(y) == Catch::Approx(direct).epsilon(1e-15));
}

TEST_CASE("finalize validates and empty() reflects content") {
    RadialSeriesFunction f;
    CHECK(f.empty());
    f.dim = 0;
    CHECK_THROWS_AS(f.finalize(), std::invalid_argument);
    f.dim = 1;
    f.terms.push_back(SeriesTerm{-1.0, 1.0, 0.0, BumpKernel::rational(2.0)});
    CHECK_THROWS_AS(f.finalize(), std::invalid_argument);
    f.terms.clear();
    f.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::rational(2.0)};
    f.finalize();
    CHECK_FALSE(f.empty());
}

TEST_CASE("lipschitz bound dominates observed difference quotients") {
    RadialSeriesFunction f;
    f.dim = 1;
    f.base = SeriesTerm{1.0, 1.0, 0.0, BumpKernel::rational(2.0)};
    f.terms.push_back(SeriesTerm{3.0, 2.0, 1.0, BumpKernel::trapezoid(0.0, 1.0, 0.5, 0.5)});
    f.finalize();
    double lip = f.lipschitz_bound();
    for (double y = 0.0; y < 10.0; y += 0.01) {
        double dq = std::fabs(f.value(y + 1e-6) - f.value(y)) / 1e-6;
        CHECK(dq <= lip * (1.0 + 1e-9) + 1e-6);
    }
}
