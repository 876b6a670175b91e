#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "multiplierlab/construct.hpp"
#include "multiplierlab/probes.hpp"
#include "multiplierlab/serialize.hpp"

using namespace mlab;
using nlohmann::json;

static double harmonic_like(std::span<const double> v) {
    return 1.0 / (1.0 + euclidean_norm(v));
}

TEST_CASE("partial sums accumulate the harmonic tail") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::power(1.0), 10, 1);
    std::vector<TrajectoryRow> rows;
    std::vector<double> x{1.0};
    double s = partial_sum(harmonic_like, seq, x, 10, &rows);
    // sum_{n<=10} 1/(1+n) = H_11 - 1
    CHECK(s == Catch::Approx(2.0198773448773446).epsilon(1e-14));
    REQUIRE(rows.size() == 10);
    CHECK(rows[0].n == 1);
    CHECK(rows[0].c == 1.0);
    CHECK(rows[0].term == 0.5);
    CHECK(rows[0].partial == 0.5);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].partial > rows[i - 1].partial);
    CHECK(rows.back().partial == s);

    CHECK(partial_sum(harmonic_like, seq, x, 0) == 0.0);
    CHECK_THROWS_AS(partial_sum(harmonic_like, seq, x, 11), std::invalid_argument);
    CHECK_THROWS_AS(partial_sum(harmonic_like, seq, x, -1), std::invalid_argument);
}

TEST_CASE("rate probe verifies every witness window") {
    RateBuild b = build_rate_counterexample(RateSequence::identity(), 1, 20);
    RateProbeReport r = limsup_probe_rate(b, 0.7, 20);
    CHECK(r.all_ok);
    REQUIRE(r.witnesses.size() == 20);
    for (const RateWitness& w : r.witnesses) {
        CHECK(w.ok);
        CHECK(w.a_exact);
        CHECK(w.ratio >= w.t_k);
        CHECK(w.ratio <= w.t_k + 1.0);
        CHECK(w.product >= static_cast<double>(w.k));
    }
    // x > 1: only levels above x have windows
    RateProbeReport r35 = limsup_probe_rate(b, 3.5, 20);
    CHECK(r35.all_ok);
    CHECK(r35.witnesses.size() == 17);  // k = 4..20
    CHECK(r35.witnesses.front().k == 4);

    RateProbeReport r0 = limsup_probe_rate(b, 0.0, 20);
    CHECK(r0.origin);
    CHECK(r0.f_at_origin == 1.0);
    CHECK(r0.all_ok);
    CHECK(r0.witnesses.empty());

    CHECK_THROWS_AS(limsup_probe_rate(b, -0.5, 20), std::invalid_argument);
    CHECK_THROWS_AS(limsup_probe_rate(b, 0.7, 0), std::invalid_argument);
    CHECK_THROWS_AS(limsup_probe_rate(b, 0.7, 21), std::invalid_argument);
}

TEST_CASE("divergence probe reaches its certified lower bound") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::blocks(2.0, 4.0), 341, 1);
    DivergenceBuild b = build_divergence_function(seq);
    std::vector<double> x{1.0};
    DivergenceProbeReport r = divergence_lower_bound(b, seq, x, seq.size());
    CHECK(r.pass);
    CHECK_FALSE(r.fallback);
    CHECK(r.selections_used == 5);
    CHECK(r.harmonic_part == Catch::Approx(1.0 + 0.5 + 1.0 / 3 + 0.25 + 0.2).epsilon(1e-14));
    CHECK(r.partial >= r.bound);
    CHECK(r.x_norm == 1.0);

    // restricting N drops later selections from the certified bound
    DivergenceProbeReport r5 = divergence_lower_bound(b, seq, x, 5);
    CHECK(r5.selections_used < 5);
    CHECK(r5.pass);

    CHECK_THROWS_AS(divergence_lower_bound(b, seq, std::vector<double>{1.0, 1.0}, 341),
                    std::invalid_argument);
}

TEST_CASE("divergence probe on the fallback branch") {
    MultiplierSequence seq(std::vector<double>(64, 2.0), 1);
    DivergenceBuild b = build_divergence_function(seq);
    DivergenceProbeReport r = divergence_lower_bound(b, seq, std::vector<double>{0.5}, 64);
    CHECK(r.fallback);
    CHECK(r.pass);
    CHECK(r.partial > 0.0);
    CHECK_FALSE(r.note.empty());
}

TEST_CASE("kernel and series round-trip through json") {
    BumpKernel kr = BumpKernel::rational(2.5);
    BumpKernel kt = BumpKernel::trapezoid(1.0, 2.0, 0.5, 0.25);
    json jr = kr, jt = kt;
    CHECK(jr.at("kind") == "rational");
    CHECK(jt.at("kind") == "trapezoid");
    CHECK(json(jr.get<BumpKernel>()) == jr);
    CHECK(json(jt.get<BumpKernel>()) == jt);

    RadialSeriesFunction f;
    f.dim = 2;
    f.lift_power = 2;
    f.base = SeriesTerm{1.5, 1.0, 0.0, kr};
    f.terms.push_back(SeriesTerm{0.25, 3.0, 2.0, kt});
    f.tail.sup_bound = std::numeric_limits<double>::infinity();
    f.tail.integral_bound = 0.125;
    f.tail.support_start = 42.0;
    f.finalize();
    json jf = f;
    CHECK(jf.at("tail").at("sup_bound") == "inf");  // infinities as tagged strings
    RadialSeriesFunction g = jf.get<RadialSeriesFunction>();
    CHECK(json(g) == jf);
    CHECK(g.value(6.25) == f.value(6.25));  // parsed copy is finalized and evaluates
}

TEST_CASE("sequences serialize compactly when family generated") {
    MultiplierSequence fam = MultiplierSequence::from_family(Family::blocks(2.0, 4.0), 21, 1);
    json jfam = fam;
    CHECK(jfam.contains("family"));
    CHECK_FALSE(jfam.contains("terms"));
    CHECK(jfam.at("N") == 21);
    MultiplierSequence back = jfam.get<MultiplierSequence>();
    CHECK(back.terms == fam.terms);
    CHECK(json(back) == jfam);

    MultiplierSequence raw({1.0, 2.5, 3.0}, 2);
    json jraw = raw;
    CHECK(jraw.contains("terms"));
    CHECK(json(jraw.get<MultiplierSequence>()) == jraw);

    CHECK_THROWS_WITH(json{{"d", 1}}.get<MultiplierSequence>(),
                      Catch::Matchers::ContainsSubstring("terms") &&
                          Catch::Matchers::ContainsSubstring("family"));
}

TEST_CASE("rate sequences round-trip in all four kinds") {
    for (const RateSequence& r :
         {RateSequence::identity(), RateSequence::power(1.5),
          RateSequence::from_values({1.0, 2.0, 9.0}, true),
          RateSequence::from_thresholds({1.0, 16.0, 81.0})}) {
        json j = r;
        CHECK(json(j.get<RateSequence>()) == j);
    }
    CHECK(json(RateSequence::identity()).at("kind") == "n");
    CHECK(json(RateSequence::power(2.0)).at("kind") == "n^p");
}

TEST_CASE("certificates round-trip through the tagged variant") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::blocks(2.0, 4.0), 341, 1);
    DivergenceBuild db = build_divergence_function(seq);
    ConstructionCertificate c3{db.cert};
    json j3 = c3;
    CHECK(j3.at("type") == "divergence");
    CHECK(j3.at("branch") == "main");
    CHECK(json(j3.get<ConstructionCertificate>()) == j3);

    RateBuild rb = build_rate_counterexample(RateSequence::identity(), 1, 5);
    ConstructionCertificate c6{rb.cert};
    json j6 = c6;
    CHECK(j6.at("type") == "rate");
    CHECK(json(j6.get<ConstructionCertificate>()) == j6);

    std::vector<double> one{10.0};
    Lemma8Stage st = lemma8_stage(one, 2.0, 20.0, 1.0, 1, 0);
    ConstructionCertificate c8{st.record};
    json j8 = c8;
    CHECK(j8.at("type") == "stage");
    CHECK(json(j8.get<ConstructionCertificate>()) == j8);

    MultiplierSequence flat(std::vector<double>(64, 3.0), 1);
    StagedBuild sb = build_perturbed_counterexample(flat, 2);
    ConstructionCertificate c4{sb.cert};
    json j4 = c4;
    CHECK(j4.at("type") == "staged");
    CHECK(j4.at("branch") == "subsequence-limit");
    CHECK(json(j4.get<ConstructionCertificate>()) == j4);

    json unknown{{"type", "nonsense"}};
    CHECK_THROWS_AS(unknown.get<ConstructionCertificate>(), std::exception);
}

TEST_CASE("missing fields name themselves in parse errors") {
    json j{{"kind", "rational"}};  // no "q"
    CHECK_THROWS_WITH(j.get<BumpKernel>(), Catch::Matchers::ContainsSubstring("q"));
    json jt{{"w", 1.0}, {"s", 1.0}, {"tau", 0.0}};  // no kernel
    CHECK_THROWS_WITH(jt.get<SeriesTerm>(), Catch::Matchers::ContainsSubstring("kernel"));
}

TEST_CASE("canonical dumps are stable byte for byte") {
    MultiplierSequence seq = MultiplierSequence::from_family(Family::power(1.0), 50, 1);
    json a = classify(seq, 2.0);
    json b = classify(seq, 2.0);
    CHECK(dump_canonical(a) == dump_canonical(b));
    CHECK(dump_canonical(a).back() == '\n');
}
