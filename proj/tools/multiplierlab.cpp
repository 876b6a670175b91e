// multiplierlab: classify multiplier sequences, synthesize certified
// counterexample functions, probe their divergence witnesses, and re-verify
// previously produced artifacts.
//
// Exit codes: 0 success, 2 input error, 3 construction precondition failure,
// 4 probe or verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "multiplierlab/classify.hpp"
#include "multiplierlab/construct.hpp"
#include "multiplierlab/integrate.hpp"
#include "multiplierlab/probes.hpp"
#include "multiplierlab/serialize.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t resolve_seed(std::uint64_t flag_seed, bool flag_given) {
    if (const char* env = std::getenv("MULTIPLIERLAB_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw std::invalid_argument("MULTIPLIERLAB_SEED is not an unsigned integer");
        return static_cast<std::uint64_t>(v);
    }
    return flag_given ? flag_seed : kDefaultSeed;
}

void emit(const std::string& output_path, const json& doc) {
    if (output_path.empty())
        std::cout << mlab::dump_canonical(doc);
    else
        mlab::write_json_file(output_path, doc);
}

// ---- sequence sources (shared by classify / synthesize) ----

struct SeqSource {
    std::string input_path;
    std::string family;
    double p = 1.0;
    double value_base = 2.0;
    double count_base = 4.0;
    double count_div = 1.0;
    std::int64_t count = 1000;
    int d = 1;
};

void add_sequence_flags(CLI::App* cmd, SeqSource& src) {
    cmd->add_option("--input", src.input_path, "sequence JSON file (terms or family + N)");
    cmd->add_option("--family", src.family,
                    "generator: power | log | blocks | power-sin");
    cmd->add_option("--p", src.p, "exponent for power / power-sin");
    cmd->add_option("--value-base", src.value_base, "blocks: value of block k is value-base^k");
    cmd->add_option("--count-base", src.count_base,
                    "blocks: block k holds ceil(count-base^k / count-div) copies");
    cmd->add_option("--count-div", src.count_div, "blocks: count divisor");
    cmd->add_option("--N", src.count, "number of generated terms");
    cmd->add_option("--d", src.d, "dimension / exponent d");
}

mlab::MultiplierSequence load_sequence(const SeqSource& src) {
    if (!src.input_path.empty())
        return mlab::read_json_file(src.input_path).get<mlab::MultiplierSequence>();
    if (src.family.empty())
        throw std::invalid_argument("no sequence given: pass --input or --family");
    mlab::Family fam;
    if (src.family == "power")
        fam = mlab::Family::power(src.p);
    else if (src.family == "log")
        fam = mlab::Family::logarithmic();
    else if (src.family == "blocks")
        fam = mlab::Family::blocks(src.value_base, src.count_base, src.count_div);
    else if (src.family == "power-sin" || src.family == "power_sin")
        fam = mlab::Family::power_sin(src.p);
    else
        throw std::invalid_argument("unknown family \"" + src.family + "\"");
    return mlab::MultiplierSequence::from_family(fam, src.count, src.d);
}

// ---- x argument parsing ----

std::vector<std::vector<double>> parse_points(const std::vector<std::string>& raw) {
    std::vector<std::vector<double>> pts;
    for (const std::string& spec : raw) {
        std::vector<double> p;
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t used = 0;
            p.push_back(std::stod(tok, &used));
            if (used != tok.size())
                throw std::invalid_argument("bad coordinate \"" + tok + "\" in --x");
        }
        if (p.empty()) throw std::invalid_argument("empty --x value");
        pts.push_back(std::move(p));
    }
    return pts;
}

// ---- classify ----

int cmd_classify(const SeqSource& src, double a, std::uint64_t seed,
                 const std::string& output) {
    mlab::MultiplierSequence seq = load_sequence(src);
    mlab::ClassificationReport rep = mlab::classify(seq, a);
    json doc;
    doc["command"] = "classify";
    doc["config"] = {{"a", a}, {"seed", seed}};
    doc["input"] = seq;
    doc["report"] = rep;
    emit(output, doc);
    return 0;
}

// ---- synthesize ----

mlab::RateSequence parse_a_seq(const std::string& s) {
    if (s == "n") return mlab::RateSequence::identity();
    if (s.rfind("n^", 0) == 0) return mlab::RateSequence::power(std::stod(s.substr(2)));
    if (!s.empty() && s[0] == '@')
        return mlab::read_json_file(s.substr(1)).get<mlab::RateSequence>();
    throw std::invalid_argument("--a-seq must be \"n\", \"n^p\", or \"@file.json\"");
}

struct SynthOptions {
    std::string theorem;
    SeqSource src;
    std::int64_t prefix = 0;
    std::string a_seq = "n";
    int k_max = 20;
    int stages = 5;
    double a = 2.0;
    double eps = 0.25;
    double S = 1.0;
    int l = 1;
    std::int64_t M = 0;
};

int cmd_synthesize(const SynthOptions& opt, std::uint64_t seed, const std::string& output) {
    json doc;
    doc["command"] = "synthesize";
    if (opt.theorem == "3" || opt.theorem == "divergence") {
        mlab::MultiplierSequence seq = load_sequence(opt.src);
        mlab::DivergenceBuild b = mlab::build_divergence_function(seq, opt.prefix);
        doc["config"] = {{"theorem", "divergence"}, {"prefix", opt.prefix}, {"seed", seed}};
        doc["input"] = seq;
        json jf = b.fn;
        jf["certificate"] = b.cert;
        doc["function"] = jf;
        doc["integral"] = mlab::ambient_integral(b.fn);
    } else if (opt.theorem == "6" || opt.theorem == "rate") {
        mlab::RateSequence rate = parse_a_seq(opt.a_seq);
        mlab::RateBuild b = mlab::build_rate_counterexample(rate, opt.src.d, opt.k_max);
        doc["config"] = {{"theorem", "rate"},
                         {"a_seq", opt.a_seq},
                         {"k_max", opt.k_max},
                         {"d", opt.src.d},
                         {"seed", seed}};
        json jf = b.fn;
        jf["certificate"] = b.cert;
        doc["function"] = jf;
        doc["integral"] = mlab::integral_1d(b.fn);
    } else if (opt.theorem == "4" || opt.theorem == "staged") {
        mlab::MultiplierSequence seq = load_sequence(opt.src);
        mlab::StagedBuild b = mlab::build_perturbed_counterexample(seq, opt.stages);
        doc["config"] = {{"theorem", "staged"}, {"stages", opt.stages}, {"seed", seed}};
        doc["input"] = seq;
        json jf = b.profile;
        jf["certificate"] = b.cert;
        doc["function"] = jf;
        doc["integral"] = mlab::integral_1d(b.profile);
    } else if (opt.theorem == "lemma8" || opt.theorem == "stage" || opt.theorem == "8") {
        mlab::MultiplierSequence seq = load_sequence(opt.src);
        mlab::Lemma8Stage st =
            mlab::lemma8_stage(seq.terms, opt.a, opt.eps, opt.S, opt.l, opt.M);
        doc["config"] = {{"theorem", "stage"}, {"a", opt.a},     {"eps", opt.eps},
                         {"S", opt.S},         {"l", opt.l},     {"M", opt.M},
                         {"seed", seed}};
        doc["input"] = seq;
        json jf = st.g;
        jf["certificate"] = st.record;
        doc["function"] = jf;
        doc["b"] = st.b;
        doc["block_indices"] = st.block_indices;
        doc["integral"] = mlab::integral_1d(st.g);
    } else {
        throw std::invalid_argument("--theorem must be one of 3, 6, 4, lemma8");
    }
    emit(output, doc);
    return 0;
}

// ---- probe ----

struct ProbeOptions {
    std::string input_path;
    std::string kind;  // rate | staged | divergence; empty = infer
    std::vector<std::string> x_raw;
    std::int64_t N = 0;  // divergence depth; 0 = full prefix
    int k_max = 0;       // rate; 0 = certificate value
    std::string csv_path;
};

void write_trajectory_csv(const std::string& path, const std::vector<mlab::TrajectoryRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "n,c_n,f_c_n_x,partial_sum\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.n << ',' << r.c << ',' << r.term << ',' << r.partial << '\n';
}

/**
 * Rebuilds the construction named by the source document's certificate,
 * requires the rebuilt function to match the stored one bit for bit, and
 * evaluates one report per probe point.  Shared by `probe` and `verify`.
 */
json run_probe_reports(const json& doc, const std::string& where, const std::string& kind_flag,
                       const std::vector<std::vector<double>>& points, std::int64_t N_flag,
                       int k_max_flag, const std::string& csv_path, bool* all_ok) {
    if (!doc.contains("function"))
        throw std::invalid_argument(where + ": no \"function\" to probe");
    const json& jfn = doc.at("function");
    if (!jfn.contains("certificate"))
        throw std::invalid_argument(where + ": function has no \"certificate\"");
    mlab::RadialSeriesFunction stored = jfn.get<mlab::RadialSeriesFunction>();
    if (stored.empty()) throw std::invalid_argument(where + ": function is empty");
    mlab::ConstructionCertificate cert =
        jfn.at("certificate").get<mlab::ConstructionCertificate>();
    std::string tag = mlab::certificate_tag(cert);
    std::string kind = kind_flag.empty() ? tag.substr(0, tag.find('-')) : kind_flag;
    if (kind != "rate" && kind != "staged" && kind != "divergence")
        throw std::invalid_argument("probe kind must be rate, staged, or divergence; got \"" +
                                    kind + "\"");
    if (tag.substr(0, tag.find('-')) != kind)
        throw std::invalid_argument(where + ": certificate is \"" + tag +
                                    "\" but the probe kind is \"" + kind + "\"");
    if (points.empty()) throw std::invalid_argument("probe needs at least one --x");

    auto require_match = [&](const json& rebuilt_fn) {
        if (rebuilt_fn != jfn)
            throw std::invalid_argument(where +
                                        ": stored function does not match its certificate");
    };
    auto load_input = [&] {
        if (!doc.contains("input"))
            throw std::invalid_argument(where + ": no \"input\" sequence to rebuild from");
        return doc.at("input").get<mlab::MultiplierSequence>();
    };

    *all_ok = true;
    json reports = json::array();
    if (kind == "rate") {
        auto c6 = std::get<mlab::Theorem6Certificate>(cert);
        mlab::RateBuild rebuilt = mlab::build_rate_counterexample(c6.rate, c6.dim, c6.k_max);
        json jre = rebuilt.fn;
        jre["certificate"] = rebuilt.cert;
        require_match(jre);
        int k_max = k_max_flag > 0 ? k_max_flag : c6.k_max;
        for (const auto& p : points) {
            if (p.size() != 1)
                throw std::invalid_argument("rate probes take scalar --x values");
            mlab::RateProbeReport r = mlab::limsup_probe_rate(rebuilt, p[0], k_max);
            *all_ok = *all_ok && r.all_ok;
            reports.push_back(r);
        }
    } else if (kind == "staged") {
        auto c4 = std::get<mlab::Theorem4Certificate>(cert);
        mlab::MultiplierSequence seq = load_input();
        mlab::StagedBuild rebuilt =
            mlab::build_perturbed_counterexample(seq, c4.stages_requested);
        json jre = rebuilt.profile;
        jre["certificate"] = rebuilt.cert;
        require_match(jre);
        for (const auto& p : points) {
            if (p.size() != 1)
                throw std::invalid_argument("staged probes take scalar --x values");
            mlab::StagedProbeReport r = mlab::blowup_probe_staged(rebuilt, p[0]);
            *all_ok = *all_ok && r.all_ok;
            reports.push_back(r);
        }
    } else {
        auto c3 = std::get<mlab::Theorem3Certificate>(cert);
        mlab::MultiplierSequence seq = load_input();
        mlab::DivergenceBuild rebuilt = mlab::build_divergence_function(seq, c3.prefix_n);
        json jre = rebuilt.fn;
        jre["certificate"] = rebuilt.cert;
        require_match(jre);
        std::int64_t N = N_flag > 0 ? N_flag : seq.size();
        bool csv_written = false;
        for (const auto& p : points) {
            if (static_cast<int>(p.size()) != seq.dim)
                throw std::invalid_argument("divergence probes need d-coordinate --x values");
            mlab::DivergenceProbeReport r = mlab::divergence_lower_bound(rebuilt, seq, p, N);
            if (!csv_path.empty() && !csv_written) {
                std::vector<mlab::TrajectoryRow> rows;
                mlab::partial_sum(
                    [&](std::span<const double> v) { return rebuilt.fn.ambient_value(v); }, seq,
                    p, N, &rows);
                write_trajectory_csv(csv_path, rows);
                csv_written = true;
            }
            *all_ok = *all_ok && r.pass;
            reports.push_back(r);
        }
    }
    return reports;
}

int cmd_probe(const ProbeOptions& opt, std::uint64_t seed, const std::string& output) {
    json doc = mlab::read_json_file(opt.input_path);
    std::vector<std::vector<double>> points = parse_points(opt.x_raw);
    bool all_ok = true;
    json reports = run_probe_reports(doc, opt.input_path, opt.kind, points, opt.N, opt.k_max,
                                     opt.csv_path, &all_ok);
    json out;
    out["command"] = "probe";
    std::string kind = opt.kind;
    if (kind.empty()) {
        std::string tag = mlab::certificate_tag(
            doc.at("function").at("certificate").get<mlab::ConstructionCertificate>());
        kind = tag.substr(0, tag.find('-'));
    }
    out["config"] = {{"kind", kind}, {"x", opt.x_raw}, {"N", opt.N},
                     {"k_max", opt.k_max}, {"seed", seed}};
    out["source"] = doc;
    out["reports"] = reports;
    out["all_ok"] = all_ok;
    emit(output, out);
    return all_ok ? 0 : 4;
}

// ---- verify ----

struct CheckLine {
    std::string file;
    std::string name;
    bool pass = false;
    std::string detail;
};

void check(std::vector<CheckLine>& out, const std::string& file, const std::string& name,
           bool pass, const std::string& detail) {
    out.push_back({file, name, pass, detail});
}

std::string num(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

void verify_classify_doc(const json& doc, const std::string& file, std::vector<CheckLine>& out) {
    mlab::MultiplierSequence seq = doc.at("input").get<mlab::MultiplierSequence>();
    double a = doc.at("config").at("a").get<double>();
    json fresh = mlab::classify(seq, a);
    check(out, file, "classify-reproduces", fresh == doc.at("report"),
          "recomputed report matches stored one bit for bit");
    bool crosses = true;
    for (const auto& c : fresh.at("cross_bounds")) crosses = crosses && c.at("pass").get<bool>();
    check(out, file, "cross-bounds", crosses, "all three quantitative implications hold");
}

void verify_divergence_doc(const json& doc, const std::string& file,
                           std::vector<CheckLine>& out) {
    mlab::MultiplierSequence seq = doc.at("input").get<mlab::MultiplierSequence>();
    std::int64_t prefix = doc.at("config").value("prefix", std::int64_t{0});
    mlab::DivergenceBuild b = mlab::build_divergence_function(seq, prefix);
    json jf = b.fn;
    jf["certificate"] = b.cert;
    check(out, file, "rebuild-bitwise", jf == doc.at("function"),
          "rebuilt function and certificate match the stored ones");
    if (b.cert.fallback) {
        check(out, file, "fallback-positive", b.fn.value(0.0) == 1.0, "f(0) = 1");
        return;
    }
    double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    check(out, file, "weight-sum", b.cert.r_sum <= pi2_6 + 1e-12,
          num(b.cert.r_sum) + " <= pi^2/6");
    mlab::IntegralResult amb = mlab::ambient_integral(b.fn);
    double rhs = b.cert.kernel_mass_ambient * b.cert.r_sum;
    bool ident = std::fabs(amb.value - rhs) <= 1e-6 * std::max(1.0, std::fabs(rhs)) +
                                                   amb.error_bound;
    check(out, file, "termwise-integral-identity", ident,
          num(amb.value) + " vs " + num(rhs));
    bool sel_ok = true;
    int expect_i = 1;
    for (const auto& s : b.cert.selections) {
        sel_ok = sel_ok && s.i == expect_i++ && s.block_sum >= static_cast<double>(s.i) &&
                 s.r == 1.0 / (static_cast<double>(s.i) * s.i * static_cast<double>(s.count)) &&
                 s.c_max / s.c_min < 2.0;
        }
    check(out, file, "selection-constraints", sel_ok,
          "l_k >= i, r = 1/(i^2 |A|), in-block spread < 2");
    std::vector<double> ones(static_cast<std::size_t>(seq.dim), 1.0);
    mlab::DivergenceProbeReport pr =
        mlab::divergence_lower_bound(b, seq, ones, seq.size());
    check(out, file, "lower-bound", pr.pass,
          "S_N = " + num(pr.partial) + " >= " + num(pr.bound));
}

void verify_rate_doc(const json& doc, const std::string& file, std::vector<CheckLine>& out) {
    auto cert = doc.at("function").at("certificate").get<mlab::Theorem6Certificate>();
    mlab::RateBuild b = mlab::build_rate_counterexample(cert.rate, cert.dim, cert.k_max);
    json jf = b.fn;
    jf["certificate"] = b.cert;
    check(out, file, "rebuild-bitwise", jf == doc.at("function"),
          "rebuilt function and certificate match the stored ones");
    mlab::IntegralResult integ = mlab::integral_1d(b.fn);
    double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    double bound = b.cert.h_mass_full * (1.0 + pi2_6);
    check(out, file, "integral-bound", integ.value + integ.error_bound <= bound + 1e-6,
          num(integ.value) + " + " + num(integ.error_bound) + " <= " + num(bound));
    bool wit = true;
    for (double x : {0.1, 0.7, 1.0, 3.5}) {
        if (x >= static_cast<double>(cert.k_max)) continue;
        wit = wit && mlab::limsup_probe_rate(b, x, cert.k_max).all_ok;
    }
    check(out, file, "witnesses", wit, "all blow-up witnesses verify at sampled x");
    bool dominates = true;
    for (double y = 0.0; y <= 2.0; y += 0.01)
        dominates = dominates && b.fn.value(y) >= b.fn.base->value(y);
    check(out, file, "dominates-head", dominates, "f~ >= h on the head support");
}

void verify_stage_doc(const json& doc, const std::string& file, std::vector<CheckLine>& out) {
    mlab::MultiplierSequence seq = doc.at("input").get<mlab::MultiplierSequence>();
    const json& cfg = doc.at("config");
    mlab::Lemma8Stage st =
        mlab::lemma8_stage(seq.terms, cfg.at("a").get<double>(), cfg.at("eps").get<double>(),
                           cfg.at("S").get<double>(), cfg.at("l").get<int>(),
                           cfg.at("M").get<std::int64_t>());
    json jf = st.g;
    jf["certificate"] = st.record;
    check(out, file, "rebuild-bitwise",
          jf == doc.at("function") && json(st.b) == doc.at("b"),
          "rebuilt stage matches the stored one");
    const mlab::Lemma8Record& r = st.record;
    bool ratio = true;
    for (std::int64_t n = r.M + 1; n <= r.N; ++n) {
        double q = st.b[static_cast<std::size_t>(n - r.M - 1)] /
                   seq.terms[static_cast<std::size_t>(n - 1)];
        ratio = ratio && q >= 1.0 / r.a && q <= r.a;
    }
    check(out, file, "ratio-sandwich", ratio, "1/a <= b_n/c_n <= a on (M, N]");
    check(out, file, "g-area", r.g_area < r.eps, num(r.g_area) + " < " + num(r.eps));
    const mlab::BumpKernel& k = st.g.base->kernel;
    check(out, file, "support", k.support_lo() > r.S && k.support_hi() <= r.T,
          "g vanishes outside (S, T]");
    mlab::GridCheck gc = mlab::lemma8_grid_check(st, 1000);
    check(out, file, "plateau-hit", gc.failures == 0,
          "min over grid of max_n g(b_n x) = " + num(gc.min_attained));
}

void verify_staged_doc(const json& doc, const std::string& file, std::vector<CheckLine>& out) {
    mlab::MultiplierSequence seq = doc.at("input").get<mlab::MultiplierSequence>();
    auto cert = doc.at("function").at("certificate").get<mlab::Theorem4Certificate>();
    mlab::StagedBuild b = mlab::build_perturbed_counterexample(seq, cert.stages_requested);
    json jf = b.profile;
    jf["certificate"] = b.cert;
    check(out, file, "rebuild-bitwise", jf == doc.at("function"),
          "rebuilt function and certificate match the stored ones");
    if (b.cert.fallback) {
        check(out, file, "fallback-positive", b.profile.value(0.0) == 1.0, "f~(0) = 1");
        return;
    }
    bool disjoint = true;
    double prev_T = 0.0;
    for (std::size_t i = 0; i < b.cert.stages.size(); ++i) {
        const auto& r = b.cert.stages[i];
        const auto& k = b.profile.terms[i].kernel;
        disjoint = disjoint && k.support_lo() > r.S && k.support_hi() <= r.T && r.S > prev_T;
        prev_T = r.T;
    }
    check(out, file, "disjoint-supports", disjoint, "stage bumps sit in disjoint (S_i, T_i]");
    mlab::IntegralResult integ = mlab::integral_1d(b.profile);
    mlab::IntegralResult head = mlab::integral_1d(
        [&] {
            mlab::RadialSeriesFunction h;
            h.dim = b.profile.dim;
            h.base = b.profile.base;
            h.finalize();
            return h;
        }());
    double bound = head.value + head.error_bound + b.cert.integral_budget;
    check(out, file, "integral-bound", integ.value <= bound + 1e-6,
          num(integ.value) + " <= " + num(bound));
    bool ratio = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < b.cert.stages.size(); ++i) {
        const auto& r = b.cert.stages[i];
        for (std::int64_t n = r.M + 1; n <= r.N; ++n) {
            double ct = std::pow(seq.terms[static_cast<std::size_t>(n - 1)],
                                 static_cast<double>(seq.dim));
            double dev = std::fabs(b.b_transformed[static_cast<std::size_t>(n - 1)] / ct - 1.0);
            worst = std::max(worst, dev - (r.a - 1.0));
            ratio = ratio && dev <= r.a - 1.0;
        }
    }
    check(out, file, "ratio-sandwich", ratio,
          "max over stages of |b~/c~ - 1| - (a_i - 1) = " + num(worst));
    bool plateau = true;
    for (std::size_t i = 0; i < b.cert.stages.size(); ++i)
        plateau = plateau && mlab::staged_grid_check(b, i, 1000).failures == 0;
    check(out, file, "plateau-hit", plateau, "1000-point grids hit every stage plateau");
}

void verify_probe_doc(const json& doc, const std::string& file, std::vector<CheckLine>& out) {
    const json& cfg = doc.at("config");
    std::vector<std::vector<double>> points =
        parse_points(cfg.at("x").get<std::vector<std::string>>());
    bool all_ok = true;
    json fresh = run_probe_reports(doc.at("source"), file, cfg.at("kind").get<std::string>(),
                                   points, cfg.value("N", std::int64_t{0}),
                                   cfg.value("k_max", 0), "", &all_ok);
    check(out, file, "probe-reproduces", fresh == doc.at("reports"),
          "re-run reports match stored ones bit for bit");
    check(out, file, "probe-passes", doc.value("all_ok", false) && all_ok,
          "probe reports are all-pass");
}

void verify_sequence_doc(const json& doc, const std::string& file,
                         std::vector<CheckLine>& out) {
    mlab::MultiplierSequence seq = doc.get<mlab::MultiplierSequence>();
    mlab::ClassificationReport rep = mlab::classify(seq);
    bool crosses =
        rep.bound_i_iii.pass && rep.bound_iii_ii.pass && rep.bound_ii_i.pass;
    check(out, file, "cross-bounds", crosses,
          "verdict " + mlab::to_string(rep.verdict) + ", all implications hold");
    double t = mlab::sorted_view(seq)[seq.terms.size() / 2];
    check(out, file, "counting-bound",
          mlab::counting_bound_holds(seq, rep.base, t, rep.max_window),
          "|{c_n < t}| <= t^d M / (1 - a^-d) at the median t");
}

void verify_one(const json& doc, const std::string& file, std::vector<CheckLine>& out) {
    const std::string command = doc.value("command", std::string{});
    if (command == "classify") {
        verify_classify_doc(doc, file, out);
    } else if (command == "synthesize") {
        const std::string type = doc.at("function").at("certificate").at("type");
        if (type == "divergence")
            verify_divergence_doc(doc, file, out);
        else if (type == "rate")
            verify_rate_doc(doc, file, out);
        else if (type == "stage")
            verify_stage_doc(doc, file, out);
        else
            verify_staged_doc(doc, file, out);
    } else if (command == "probe") {
        verify_probe_doc(doc, file, out);
    } else if (command.empty() && (doc.contains("terms") || doc.contains("family"))) {
        verify_sequence_doc(doc, file, out);
    } else {
        check(out, file, "recognized", false, "not a multiplierlab document");
    }
}

int cmd_verify(const std::vector<std::string>& paths, std::uint64_t seed,
               const std::string& output) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const std::string& p : paths) {
        if (fs::is_directory(p)) {
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".json")
                    files.push_back(e.path().string());
            std::sort(files.begin(), files.end());
        } else {
            files.push_back(p);
        }
    }
    std::vector<CheckLine> checks;
    for (const std::string& f : files) verify_one(mlab::read_json_file(f), f, checks);
    if (checks.empty())
        std::cerr << "warning: no JSON documents found; nothing to verify\n";

    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.file << " :: " << c.name << " ("
                  << c.detail << ")\n";
    }
    std::cout << (all ? "verify: all checks passed" : "verify: FAILURES present") << " ("
              << checks.size() << " checks)\n";
    if (!output.empty()) {
        json doc;
        doc["command"] = "verify";
        doc["config"] = {{"seed", seed}};
        json arr = json::array();
        for (const auto& c : checks)
            arr.push_back({{"file", c.file}, {"name", c.name}, {"pass", c.pass},
                           {"detail", c.detail}});
        doc["checks"] = arr;
        doc["all_pass"] = all;
        mlab::write_json_file(output, doc);
    }
    return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplier sequence laboratory: classification, certified "
                 "counterexample synthesis, witness probing, artifact verification"};
    app.require_subcommand(1);

    std::string output;
    std::uint64_t seed = kDefaultSeed;

    SeqSource cls_src;
    double cls_a = 2.0;
    CLI::App* cls = app.add_subcommand("classify", "boundedness statistics of a sequence");
    add_sequence_flags(cls, cls_src);
    cls->add_option("--a", cls_a, "dyadic base (default 2)");

    SynthOptions syn;
    CLI::App* s = app.add_subcommand("synthesize", "build a certified counterexample function");
    s->add_option("--theorem", syn.theorem, "3|divergence, 6|rate, 4|staged, lemma8")
        ->required();
    add_sequence_flags(s, syn.src);
    s->add_option("--prefix", syn.prefix, "divergence: prefix length (0 = all terms)");
    s->add_option("--a-seq", syn.a_seq, "rate: \"n\", \"n^p\", or \"@file.json\"");
    s->add_option("--k-max", syn.k_max, "rate: number of materialized terms");
    s->add_option("--stages", syn.stages, "staged: number of materialized stages");
    s->add_option("--a", syn.a, "stage: ratio base a > 1");
    s->add_option("--eps", syn.eps, "stage: area budget");
    s->add_option("--S", syn.S, "stage: left support barrier");
    s->add_option("--l", syn.l, "stage: target interval exponent");
    s->add_option("--M", syn.M, "stage: protected prefix length");

    ProbeOptions prb;
    CLI::App* p = app.add_subcommand("probe", "re-derive witnesses from a synthesized file");
    p->add_option("--input", prb.input_path, "synthesize output file")->required();
    p->add_option("--kind", prb.kind, "rate | staged | divergence (default: from certificate)");
    p->add_option("--x", prb.x_raw, "probe point; repeatable; comma-separated coordinates")
        ->required();
    p->add_option("--N", prb.N, "divergence: partial-sum depth (0 = full prefix)");
    p->add_option("--k-max", prb.k_max, "rate: witness range (0 = certificate value)");
    p->add_option("--csv", prb.csv_path, "write the first point's trajectory as CSV");

    std::vector<std::string> ver_paths;
    CLI::App* v = app.add_subcommand("verify", "re-check stored artifacts");
    v->add_option("paths", ver_paths, "JSON files or directories")->required();

    for (CLI::App* sub : {cls, s, p, v}) {
        sub->add_option("-o,--output", output, "write the JSON document here (default: stdout)");
        sub->add_option("--seed", seed, "RNG seed (MULTIPLIERLAB_SEED overrides)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::uint64_t use_seed = resolve_seed(seed, seed != kDefaultSeed);
        if (app.got_subcommand(cls)) return cmd_classify(cls_src, cls_a, use_seed, output);
        if (app.got_subcommand(s)) return cmd_synthesize(syn, use_seed, output);
        if (app.got_subcommand(p)) return cmd_probe(prb, use_seed, output);
        return cmd_verify(ver_paths, use_seed, output);
    } catch (const mlab::BuildError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
