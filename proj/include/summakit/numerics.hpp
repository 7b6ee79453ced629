#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace summakit {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Neumaier-compensated accumulator. Tail-sum rows and weight series mix
// magnitudes badly enough that plain left-to-right summation loses
// digits; the running compensation keeps results within a couple of
// ulps of the exact sum at O(1) extra cost.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// |x|^k with an underflow guard: magnitudes below 1e-300 contribute 0,
// so fractional powers of denormal differences cannot poison a series.
double pow_abs(double x, double k);

// Least-squares slope of log(y) against log(x). Points with
// nonpositive x or nonpositive/nonfinite y are skipped; returns 0 when
// fewer than two usable points remain or the x spread is degenerate.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

// SplitMix64 mixer: an index-addressable deterministic stream, used so
// that "random" inputs are pure functions of (seed, index).
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic value in [-1, 1), pure in (seed, n).
double seeded_unit(std::uint64_t seed, std::int64_t n);

// Wrap t into [-pi, pi).
double wrap_angle(double t);

}  // namespace summakit
