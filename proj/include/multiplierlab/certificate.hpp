#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "multiplierlab/rate_sequence.hpp"
#include "multiplierlab/sequence.hpp"

namespace mlab {

/** Everything needed to re-derive one selected block of a divergence build. */
struct Theorem3Selection {
    int i = 0;               // selection counter (weights are 1/i^2)
    int k = 0;               // dyadic block key
    std::int64_t count = 0;  // |A_k|
    double block_sum = 0.0;  // l_k
    double r = 0.0;          // 1 / (i^2 |A_k|)
    double c_min = 0.0, c_max = 0.0;
    std::int64_t max_index = 0;  // largest member index (block fully stored below it)
    double term_weight = 0.0;    // aggregated series coefficient r * l_k
};

struct Theorem3Certificate {
    int dim = 1;
    double base = 2.0;
    std::int64_t prefix_n = 0;
    bool fallback = false;  // terms did not trend to infinity: pure kernel branch
    std::vector<Theorem3Selection> selections;
    double r_sum = 0.0;           // sum of r_{k(m)} over contributing m  (= sum 1/i^2)
    double coeff_sum = 0.0;       // sum of series coefficients r/c^d     (= sum r l)
    double witness_sum = 0.0;     // sum of r |A| l over selections
    double harmonic_floor = 0.0;  // sum of 1/i over selections
    double kernel_mass_ambient = 0.0;  // closed-form integral of the unscaled kernel over R^d
    std::optional<Family> seq_family;  // present when the input was family generated
};

struct Theorem6Certificate {
    int dim = 1;
    int k_max = 0;
    RateSequence rate;
    std::vector<double> thresholds;  // t_1 .. t_{k_max}
    double h_mass_full = 0.0;        // integral of h over R
    double h_mass_halfline = 0.0;    // integral of h over [0, inf)
};

struct Lemma8Record {
    int stage = 0;  // 0 for a standalone stage
    double a = 2.0;
    int l = 0;
    double eps = 0.0;
    double S = 0.0, T = 0.0;
    std::int64_t M = 0, N = 0;
    int K = 0;
    std::int64_t block_count = 0;
    double plateau_lo = 0.0, plateau_hi = 0.0;
    double plateau_measure = 0.0;
    double ramp_width = 0.0;
    double g_area = 0.0;
};

struct Theorem4Certificate {
    int dim = 1;
    bool fallback = false;  // terms did not trend to infinity: b = c, pure kernel
    int stages_requested = 0;
    std::vector<Lemma8Record> stages;
    double h_weight = 1.0;
    double integral_budget = 0.0;  // sum over stages of 2^i eps_i
    std::optional<Family> seq_family;
    std::int64_t prefix_n = 0;
};

using ConstructionCertificate =
    std::variant<Theorem3Certificate, Theorem6Certificate, Lemma8Record, Theorem4Certificate>;

inline std::string certificate_tag(const ConstructionCertificate& c) {
    if (std::holds_alternative<Theorem3Certificate>(c))
        return std::get<Theorem3Certificate>(c).fallback ? "divergence-fallback" : "divergence";
    if (std::holds_alternative<Theorem6Certificate>(c)) return "rate";
    if (std::holds_alternative<Lemma8Record>(c)) return "stage";
    return std::get<Theorem4Certificate>(c).fallback ? "staged-fallback" : "staged";
}

}  // namespace mlab
