#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlab {

struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * The rate sequence (a_n) of a divergence-rate problem: nonnegative, with
 * a_n -> infinity assumed.  Thresholds t_k are the least integer t such that
 * every n >= t has a_n >= k^4.
 *
 * Finite data alone can never certify a property of all n >= t, so explicit
 * values need the nondecreasing-tail tag (terms beyond the stored prefix are
 * at least the last stored one); alternatively the thresholds themselves may
 * be supplied.
 */
struct RateSequence {
    enum class Kind { identity, power, explicit_values, explicit_thresholds };

    Kind kind = Kind::identity;
    double p = 1.0;                   // power: a_n = n^p
    std::vector<double> values;       // explicit_values mode
    bool nondecreasing_tail = false;  // tail tag for explicit_values
    std::vector<double> thresholds;   // explicit_thresholds mode: t_1, t_2, ...

    static RateSequence identity() { return RateSequence{}; }
    static RateSequence power(double p) {
        if (!(p > 0.0)) throw std::invalid_argument("rate sequence: power exponent must be > 0");
        RateSequence r;
        r.kind = Kind::power;
        r.p = p;
        return r;
    }
    static RateSequence from_values(std::vector<double> v, bool tail_tag) {
        RateSequence r;
        r.kind = Kind::explicit_values;
        r.values = std::move(v);
        r.nondecreasing_tail = tail_tag;
        for (double a : r.values)
            if (!(a >= 0.0)) throw std::invalid_argument("rate sequence: terms must be >= 0");
        return r;
    }
    static RateSequence from_thresholds(std::vector<double> t) {
        RateSequence r;
        r.kind = Kind::explicit_thresholds;
        r.thresholds = std::move(t);
        for (std::size_t i = 0; i < r.thresholds.size(); ++i) {
            if (!(r.thresholds[i] >= 1.0))
                throw std::invalid_argument("rate sequence: thresholds must be >= 1");
            if (i > 0 && r.thresholds[i] < r.thresholds[i - 1])
                throw std::invalid_argument("rate sequence: thresholds must be nondecreasing");
        }
        return r;
    }

    // a_n when it is exactly known.
    std::optional<double> exact_value(std::int64_t n) const {
        if (n < 1) throw std::invalid_argument("rate sequence: index must be >= 1");
        switch (kind) {
            case Kind::identity: return static_cast<double>(n);
            case Kind::power: return std::pow(static_cast<double>(n), p);
            case Kind::explicit_values:
                if (n <= static_cast<std::int64_t>(values.size()))
                    return values[static_cast<std::size_t>(n - 1)];
                return std::nullopt;
            case Kind::explicit_thresholds: return std::nullopt;
        }
        return std::nullopt;
    }

    // certified lower bound on a_n (uses the tail tag beyond stored values).
    double lower_bound(std::int64_t n) const {
        if (auto v = exact_value(n)) return *v;
        if (kind == Kind::explicit_values && nondecreasing_tail && !values.empty())
            return values.back();
        if (kind == Kind::explicit_thresholds) {
            // n >= t_k certifies a_n >= k^4
            double lb = 0.0;
            for (std::size_t k = 1; k <= thresholds.size(); ++k)
                if (static_cast<double>(n) >= thresholds[k - 1])
                    lb = std::pow(static_cast<double>(k), 4.0);
            return lb;
        }
        return 0.0;
    }

    double threshold(int k) const {
        if (k < 1) throw std::invalid_argument("rate sequence: threshold index must be >= 1");
        double target = std::pow(static_cast<double>(k), 4.0);
        switch (kind) {
            case Kind::identity: {
                // least integer t with (n >= t implies n >= k^4)
                return target;
            }
            case Kind::power: {
                // least integer t with t^p >= k^4
                double t = std::ceil(std::pow(target, 1.0 / p));
                while (t > 1.0 && std::pow(t - 1.0, p) >= target) t -= 1.0;
                while (std::pow(t, p) < target) t += 1.0;
                return std::max(t, 1.0);
            }
            case Kind::explicit_values: {
                if (!nondecreasing_tail)
                    throw BuildError(
                        "rate sequence: explicit values without the nondecreasing-tail tag cannot "
                        "define thresholds (the condition quantifies over all n)");
                std::int64_t last_bad = 0;
                for (std::int64_t n = 1; n <= static_cast<std::int64_t>(values.size()); ++n)
                    if (values[static_cast<std::size_t>(n - 1)] < target) last_bad = n;
                if (last_bad == static_cast<std::int64_t>(values.size()))
                    throw BuildError("rate sequence: stored prefix never reaches level " +
                                     std::to_string(k) + "^4; threshold t_" + std::to_string(k) +
                                     " is undefined");
                return static_cast<double>(last_bad + 1);
            }
            case Kind::explicit_thresholds: {
                if (k > static_cast<int>(thresholds.size()))
                    throw BuildError("rate sequence: no stored threshold t_" + std::to_string(k));
                return thresholds[static_cast<std::size_t>(k - 1)];
            }
        }
        throw BuildError("rate sequence: unknown kind");
    }

    std::string describe() const {
        switch (kind) {
            case Kind::identity: return "n";
            case Kind::power: return "n^" + std::to_string(p);
            case Kind::explicit_values: return "explicit values";
            case Kind::explicit_thresholds: return "explicit thresholds";
        }
        return "?";
    }
};

}  // namespace mlab
