#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "multiplierlab/certificate.hpp"
#include "multiplierlab/classify.hpp"
#include "multiplierlab/integrate.hpp"
#include "multiplierlab/probes.hpp"
#include "multiplierlab/rate_sequence.hpp"
#include "multiplierlab/sequence.hpp"
#include "multiplierlab/series.hpp"

namespace mlab {

namespace jsondetail {

inline const nlohmann::json& req(const nlohmann::json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing field \"") + field + "\"");
    return *it;
}

// infinities round-trip as the strings "inf" / "-inf"; everything else as
// plain numbers (shortest form that parses back to the same double)
inline nlohmann::json enc_double(double v) {
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    return v;
}

inline double dec_double(const nlohmann::json& j, const char* field) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument(std::string("field \"") + field +
                                    "\": expected a number or \"inf\"");
    }
    if (!j.is_number())
        throw std::invalid_argument(std::string("field \"") + field + "\": expected a number");
    return j.get<double>();
}

}  // namespace jsondetail

// ---- sequences ----

inline void to_json(nlohmann::json& j, const Family& f) {
    switch (f.kind) {
        case FamilyKind::power: j["kind"] = "power"; j["p"] = f.p; break;
        case FamilyKind::logarithmic: j["kind"] = "log"; break;
        case FamilyKind::power_sin: j["kind"] = "power_sin"; j["p"] = f.p; break;
        case FamilyKind::blocks:
            j["kind"] = "blocks";
            j["value_base"] = f.value_base;
            j["count_base"] = f.count_base;
            j["count_div"] = f.count_div;
            break;
    }
    if (f.ceiled) j["ceiled"] = true;
}

inline void from_json(const nlohmann::json& j, Family& f) {
    const std::string kind = jsondetail::req(j, "kind").get<std::string>();
    if (kind == "power") {
        f = Family::power(jsondetail::req(j, "p").get<double>());
    } else if (kind == "log" || kind == "logarithmic") {
        f = Family::logarithmic();
    } else if (kind == "power_sin") {
        f = Family::power_sin(jsondetail::req(j, "p").get<double>());
    } else if (kind == "blocks") {
        f = Family::blocks(jsondetail::req(j, "value_base").get<double>(),
                           jsondetail::req(j, "count_base").get<double>(),
                           j.value("count_div", 1.0));
    } else {
        throw std::invalid_argument("field \"kind\": unknown family \"" + kind + "\"");
    }
    f.ceiled = j.value("ceiled", false);
    f.validate();
}

// Family-backed sequences store only the generator and the length; explicit
// sequences store their terms.  Both regenerate bit for bit.
inline void to_json(nlohmann::json& j, const MultiplierSequence& s) {
    j["d"] = s.dim;
    if (s.family) {
        j["family"] = *s.family;
        j["N"] = s.size();
    } else {
        j["terms"] = s.terms;
    }
}

inline void from_json(const nlohmann::json& j, MultiplierSequence& s) {
    const int d = j.value("d", 1);
    if (j.contains("terms")) {
        std::optional<Family> fam;
        if (j.contains("family")) fam = j.at("family").get<Family>();
        s = MultiplierSequence(j.at("terms").get<std::vector<double>>(), d, fam);
        return;
    }
    if (j.contains("family")) {
        Family fam = j.at("family").get<Family>();
        const std::int64_t n = jsondetail::req(j, "N").get<std::int64_t>();
        s = MultiplierSequence::from_family(fam, n, d);
        return;
    }
    throw std::invalid_argument("sequence: missing \"terms\" and \"family\"");
}

// ---- kernels and series ----

inline void to_json(nlohmann::json& j, const BumpKernel& k) {
    if (k.kind == BumpKernel::Kind::rational) {
        j["kind"] = "rational";
        j["q"] = k.q;
    } else {
        j["kind"] = "trapezoid";
        j["p0"] = k.p0;
        j["p1"] = k.p1;
        j["wl"] = k.wl;
        j["wr"] = k.wr;
    }
}

inline void from_json(const nlohmann::json& j, BumpKernel& k) {
    const std::string kind = jsondetail::req(j, "kind").get<std::string>();
    if (kind == "rational") {
        k = BumpKernel::rational(jsondetail::req(j, "q").get<double>());
    } else if (kind == "trapezoid") {
        k = BumpKernel::trapezoid(
            jsondetail::req(j, "p0").get<double>(), jsondetail::req(j, "p1").get<double>(),
            jsondetail::req(j, "wl").get<double>(), jsondetail::req(j, "wr").get<double>());
    } else {
        throw std::invalid_argument("field \"kind\": unknown kernel \"" + kind + "\"");
    }
}

inline void to_json(nlohmann::json& j, const SeriesTerm& t) {
    j["w"] = t.weight;
    j["s"] = t.scale;
    j["tau"] = t.shift;
    j["kernel"] = t.kernel;
}

inline void from_json(const nlohmann::json& j, SeriesTerm& t) {
    t.weight = jsondetail::req(j, "w").get<double>();
    t.scale = j.value("s", 1.0);
    t.shift = j.value("tau", 0.0);
    t.kernel = jsondetail::req(j, "kernel").get<BumpKernel>();
    t.validate();
}

inline void to_json(nlohmann::json& j, const TailInfo& t) {
    j["sup_bound"] = jsondetail::enc_double(t.sup_bound);
    j["integral_bound"] = jsondetail::enc_double(t.integral_bound);
    j["support_start"] = jsondetail::enc_double(t.support_start);
}

inline void from_json(const nlohmann::json& j, TailInfo& t) {
    t.sup_bound = jsondetail::dec_double(jsondetail::req(j, "sup_bound"), "sup_bound");
    t.integral_bound =
        jsondetail::dec_double(jsondetail::req(j, "integral_bound"), "integral_bound");
    t.support_start =
        jsondetail::dec_double(jsondetail::req(j, "support_start"), "support_start");
}

inline void to_json(nlohmann::json& j, const RadialSeriesFunction& f) {
    j["d"] = f.dim;
    j["lift_power"] = f.lift_power;
    j["tail"] = f.tail;
    j["terms"] = f.terms;
    if (f.base) {
        j["base"] = nlohmann::json{{"w", f.base->weight}, {"kernel", f.base->kernel}};
    }
}

inline void from_json(const nlohmann::json& j, RadialSeriesFunction& f) {
    f = RadialSeriesFunction{};
    f.dim = j.value("d", 1);
    f.lift_power = j.value("lift_power", 1);
    if (j.contains("tail")) f.tail = j.at("tail").get<TailInfo>();
    f.terms = j.value("terms", std::vector<SeriesTerm>{});
    if (j.contains("base")) {
        SeriesTerm b;
        b.weight = jsondetail::req(j.at("base"), "w").get<double>();
        b.scale = 1.0;
        b.shift = 0.0;
        b.kernel = jsondetail::req(j.at("base"), "kernel").get<BumpKernel>();
        f.base = b;
    }
    f.finalize();
}

// ---- rate sequences ----

inline void to_json(nlohmann::json& j, const RateSequence& r) {
    switch (r.kind) {
        case RateSequence::Kind::identity: j["kind"] = "n"; break;
        case RateSequence::Kind::power:
            j["kind"] = "n^p";
            j["p"] = r.p;
            break;
        case RateSequence::Kind::explicit_values:
            j["kind"] = "values";
            j["values"] = r.values;
            j["nondecreasing_tail"] = r.nondecreasing_tail;
            break;
        case RateSequence::Kind::explicit_thresholds:
            j["kind"] = "thresholds";
            j["thresholds"] = r.thresholds;
            break;
    }
}

inline void from_json(const nlohmann::json& j, RateSequence& r) {
    const std::string kind = jsondetail::req(j, "kind").get<std::string>();
    if (kind == "n") {
        r = RateSequence::identity();
    } else if (kind == "n^p") {
        r = RateSequence::power(jsondetail::req(j, "p").get<double>());
    } else if (kind == "values") {
        r = RateSequence::from_values(jsondetail::req(j, "values").get<std::vector<double>>(),
                                      j.value("nondecreasing_tail", false));
    } else if (kind == "thresholds") {
        r = RateSequence::from_thresholds(
            jsondetail::req(j, "thresholds").get<std::vector<double>>());
    } else {
        throw std::invalid_argument("field \"kind\": unknown rate sequence \"" + kind + "\"");
    }
}

// ---- certificates ----

inline void to_json(nlohmann::json& j, const Theorem3Selection& s) {
    j = nlohmann::json{{"i", s.i},         {"k", s.k},
                       {"count", s.count}, {"block_sum", s.block_sum},
                       {"r", s.r},         {"c_min", s.c_min},
                       {"c_max", s.c_max}, {"max_index", s.max_index},
                       {"term_weight", s.term_weight}};
}

inline void from_json(const nlohmann::json& j, Theorem3Selection& s) {
    s.i = jsondetail::req(j, "i").get<int>();
    s.k = jsondetail::req(j, "k").get<int>();
    s.count = jsondetail::req(j, "count").get<std::int64_t>();
    s.block_sum = jsondetail::req(j, "block_sum").get<double>();
    s.r = jsondetail::req(j, "r").get<double>();
    s.c_min = jsondetail::req(j, "c_min").get<double>();
    s.c_max = jsondetail::req(j, "c_max").get<double>();
    s.max_index = jsondetail::req(j, "max_index").get<std::int64_t>();
    s.term_weight = jsondetail::req(j, "term_weight").get<double>();
}

inline void to_json(nlohmann::json& j, const Theorem3Certificate& c) {
    j["type"] = "divergence";
    j["branch"] = c.fallback ? "subsequence-limit" : "main";
    j["d"] = c.dim;
    j["a"] = c.base;
    j["prefix_n"] = c.prefix_n;
    j["selections"] = c.selections;
    j["r_sum"] = c.r_sum;
    j["coeff_sum"] = c.coeff_sum;
    j["witness_sum"] = c.witness_sum;
    j["harmonic_floor"] = c.harmonic_floor;
    j["kernel_mass_ambient"] = c.kernel_mass_ambient;
    if (c.seq_family) j["family"] = *c.seq_family;
}

inline void from_json(const nlohmann::json& j, Theorem3Certificate& c) {
    c = Theorem3Certificate{};
    c.fallback = j.value("branch", std::string("main")) == "subsequence-limit";
    c.dim = j.value("d", 1);
    c.base = j.value("a", 2.0);
    c.prefix_n = j.value("prefix_n", std::int64_t{0});
    c.selections = j.value("selections", std::vector<Theorem3Selection>{});
    c.r_sum = j.value("r_sum", 0.0);
    c.coeff_sum = j.value("coeff_sum", 0.0);
    c.witness_sum = j.value("witness_sum", 0.0);
    c.harmonic_floor = j.value("harmonic_floor", 0.0);
    c.kernel_mass_ambient = j.value("kernel_mass_ambient", 0.0);
    if (j.contains("family")) c.seq_family = j.at("family").get<Family>();
}

inline void to_json(nlohmann::json& j, const Theorem6Certificate& c) {
    j["type"] = "rate";
    j["d"] = c.dim;
    j["k_max"] = c.k_max;
    j["rate"] = c.rate;
    j["thresholds"] = c.thresholds;
    j["h_mass_full"] = c.h_mass_full;
    j["h_mass_halfline"] = c.h_mass_halfline;
}

inline void from_json(const nlohmann::json& j, Theorem6Certificate& c) {
    c = Theorem6Certificate{};
    c.dim = j.value("d", 1);
    c.k_max = jsondetail::req(j, "k_max").get<int>();
    c.rate = jsondetail::req(j, "rate").get<RateSequence>();
    c.thresholds = jsondetail::req(j, "thresholds").get<std::vector<double>>();
    c.h_mass_full = j.value("h_mass_full", 0.0);
    c.h_mass_halfline = j.value("h_mass_halfline", 0.0);
}

inline void to_json(nlohmann::json& j, const Lemma8Record& r) {
    j = nlohmann::json{{"type", "stage"},
                       {"stage", r.stage},
                       {"a", r.a},
                       {"l", r.l},
                       {"eps", r.eps},
                       {"S", r.S},
                       {"T", r.T},
                       {"M", r.M},
                       {"N", r.N},
                       {"K", r.K},
                       {"block_count", r.block_count},
                       {"plateau_lo", r.plateau_lo},
                       {"plateau_hi", r.plateau_hi},
                       {"plateau_measure", r.plateau_measure},
                       {"ramp_width", r.ramp_width},
                       {"g_area", r.g_area}};
}

inline void from_json(const nlohmann::json& j, Lemma8Record& r) {
    r.stage = j.value("stage", 0);
    r.a = jsondetail::req(j, "a").get<double>();
    r.l = jsondetail::req(j, "l").get<int>();
    r.eps = jsondetail::req(j, "eps").get<double>();
    r.S = jsondetail::req(j, "S").get<double>();
    r.T = jsondetail::req(j, "T").get<double>();
    r.M = jsondetail::req(j, "M").get<std::int64_t>();
    r.N = jsondetail::req(j, "N").get<std::int64_t>();
    r.K = jsondetail::req(j, "K").get<int>();
    r.block_count = jsondetail::req(j, "block_count").get<std::int64_t>();
    r.plateau_lo = jsondetail::req(j, "plateau_lo").get<double>();
    r.plateau_hi = jsondetail::req(j, "plateau_hi").get<double>();
    r.plateau_measure = jsondetail::req(j, "plateau_measure").get<double>();
    r.ramp_width = jsondetail::req(j, "ramp_width").get<double>();
    r.g_area = j.value("g_area", 0.0);
}

inline void to_json(nlohmann::json& j, const Theorem4Certificate& c) {
    j["type"] = "staged";
    j["branch"] = c.fallback ? "subsequence-limit" : "main";
    j["d"] = c.dim;
    j["stages_requested"] = c.stages_requested;
    j["stages"] = c.stages;
    j["h_weight"] = c.h_weight;
    j["integral_budget"] = c.integral_budget;
    j["prefix_n"] = c.prefix_n;
    if (c.seq_family) j["family"] = *c.seq_family;
}

inline void from_json(const nlohmann::json& j, Theorem4Certificate& c) {
    c = Theorem4Certificate{};
    c.fallback = j.value("branch", std::string("main")) == "subsequence-limit";
    c.dim = j.value("d", 1);
    c.stages_requested = j.value("stages_requested", 0);
    c.stages = j.value("stages", std::vector<Lemma8Record>{});
    c.h_weight = j.value("h_weight", 1.0);
    c.integral_budget = j.value("integral_budget", 0.0);
    c.prefix_n = j.value("prefix_n", std::int64_t{0});
    if (j.contains("family")) c.seq_family = j.at("family").get<Family>();
}

inline void to_json(nlohmann::json& j, const ConstructionCertificate& c) {
    std::visit([&](const auto& v) { j = v; }, c);
}

inline void from_json(const nlohmann::json& j, ConstructionCertificate& c) {
    const std::string type = jsondetail::req(j, "type").get<std::string>();
    if (type == "divergence")
        c = j.get<Theorem3Certificate>();
    else if (type == "rate")
        c = j.get<Theorem6Certificate>();
    else if (type == "stage")
        c = j.get<Lemma8Record>();
    else if (type == "staged")
        c = j.get<Theorem4Certificate>();
    else
        throw std::invalid_argument("field \"type\": unknown certificate \"" + type + "\"");
}

// ---- reports ----

inline void to_json(nlohmann::json& j, const CrossBoundCheck& c) {
    j = nlohmann::json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}};
}

inline void to_json(nlohmann::json& j, const ClassificationReport& r) {
    j["a"] = r.base;
    j["d"] = r.dim;
    j["n"] = r.n;
    j["family"] = r.family;
    j["verdict"] = to_string(r.verdict);
    j["growth_stat"] = r.growth_stat;
    j["growth_argmax_m"] = r.growth_argmax_m;
    j["growth_stat_half"] = r.growth_stat_half;
    j["max_ratio"] = r.max_ratio;
    j["ratio_argmax_k"] = r.ratio_argmax_k;
    j["max_ratio_half"] = r.max_ratio_half;
    j["max_window"] = r.max_window;
    j["window_argmax_t"] = r.window_argmax_t;
    j["window_probe_count"] = r.window_probe_count;
    j["cross_bounds"] =
        nlohmann::json::array({r.bound_i_iii, r.bound_iii_ii, r.bound_ii_i});
    j["evidence_growth_factor"] = r.growth_factor;
}

inline void to_json(nlohmann::json& j, const IntegralResult& r) {
    j = nlohmann::json{{"value", r.value}, {"error_bound", r.error_bound}};
}

inline void to_json(nlohmann::json& j, const RadialIdentityReport& r) {
    j = nlohmann::json{{"d", r.dim},
                       {"samples", r.samples},
                       {"seed", r.seed},
                       {"mc_mean", r.mc_mean},
                       {"mc_stderr", r.mc_stderr},
                       {"quad_value", r.quad_value},
                       {"quad_error_bound", r.quad_error_bound},
                       {"abs_diff", r.abs_diff},
                       {"within_3se", r.within_3se}};
}

inline void to_json(nlohmann::json& j, const RateWitness& w) {
    j = nlohmann::json{{"k", w.k},          {"n", w.n},
                       {"t_k", w.t_k},      {"ratio", w.ratio},
                       {"f", w.f_value},    {"a", w.a_value},
                       {"a_exact", w.a_exact}, {"product", w.product},
                       {"ok", w.ok}};
}

inline void to_json(nlohmann::json& j, const RateProbeReport& r) {
    j["x"] = r.x;
    j["k_max"] = r.k_max;
    j["origin"] = r.origin;
    if (r.origin) j["f_at_origin"] = r.f_at_origin;
    j["witnesses"] = r.witnesses;
    j["all_ok"] = r.all_ok;
    if (!r.note.empty()) j["note"] = r.note;
}

inline void to_json(nlohmann::json& j, const StagedStageProbe& p) {
    j = nlohmann::json{{"stage", p.stage},   {"a", p.a},
                       {"l", p.l},           {"qualifies", p.qualifies},
                       {"n", p.witness_n},   {"b", p.b_value},
                       {"arg", p.arg},       {"g", p.g_value},
                       {"attained", p.attained}, {"required", p.required},
                       {"ok", p.ok}};
}

inline void to_json(nlohmann::json& j, const StagedProbeReport& r) {
    j["x"] = r.x;
    j["origin"] = r.origin;
    if (r.origin || r.rows.empty()) j["f_at_origin"] = r.f_at_origin;
    j["stages"] = r.rows;
    j["any_qualifies"] = r.any_qualifies;
    j["all_ok"] = r.all_ok;
    if (!r.note.empty()) j["note"] = r.note;
}

inline void to_json(nlohmann::json& j, const DivergenceProbeReport& r) {
    j["x"] = r.x;
    j["x_norm"] = r.x_norm;
    j["N"] = r.N;
    j["partial_sum"] = r.partial;
    j["kernel_at_2x"] = r.kernel_at_2x;
    j["bound"] = r.bound;
    j["harmonic_part"] = r.harmonic_part;
    j["selections_used"] = r.selections_used;
    j["fallback"] = r.fallback;
    j["pass"] = r.pass;
    if (!r.note.empty()) j["note"] = r.note;
}

inline void to_json(nlohmann::json& j, const GridCheck& g) {
    j = nlohmann::json{{"points", g.points},
                       {"failures", g.failures},
                       {"min_attained", jsondetail::enc_double(g.min_attained)}};
}

// ---- files ----

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline std::string dump_canonical(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << dump_canonical(j);
}

}  // namespace mlab
