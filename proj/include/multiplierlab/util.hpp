#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mlab {

// Compensated accumulator.  Adding nonnegative terms never decreases value().
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <class It>
double kahan_sum(It first, It last) {
    KahanSum acc;
    for (; first != last; ++first) acc.add(*first);
    return acc.value();
}

// Order-canonical sum: addends are sorted ascending before accumulation, so the
// result is invariant under permutation of the inputs (bit for bit).
inline double canonical_sum(std::vector<double> addends) {
    std::sort(addends.begin(), addends.end());
    return kahan_sum(addends.begin(), addends.end());
}

// a <= b, allowing b to be nudged up by at most `ulps` representable steps.
inline bool le_ulps(double a, double b, int ulps) {
    if (a <= b) return true;
    for (int i = 0; i < ulps; ++i) {
        b = std::nextafter(b, std::numeric_limits<double>::infinity());
        if (a <= b) return true;
    }
    return false;
}

inline double euclidean_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double inv_pow(double c, int d) { return 1.0 / std::pow(c, static_cast<double>(d)); }

}  // namespace mlab
