#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace summakit {

enum class Verdict { supported, violated, inconclusive };
enum class Flatness { flat, growing, inconclusive };

const char* to_string(Verdict v);
const char* to_string(Flatness f);

// Side on which a sampled statistic must stay bounded: a sup-ratio or a
// variation total is bounded above; an almost-decreasing witness must
// stay bounded away from zero from below.
enum class Bound { above, below };

struct TrendThresholds {
  double slope_ok_above = 0.05;   // max admissible fitted slope, Bound::above
  double slope_ok_below = -0.02;  // min admissible fitted slope, Bound::below
  double violation_factor = 4.0;  // monotone degradation factor first -> last
  double violation_slope = 0.5;   // degrading slope magnitude that flags violation
};

struct FlatnessThresholds {
  double gain_fraction = 1e-3;  // recent-mass share that still counts as flat
  double gain_floor = 1e-3;     // absolute scale floor for the flat test
  double flat_slope = -1.05;    // increment slope at or below which the sum is flat
  double grow_slope = -0.95;    // increment slope at or above which growth is credible
  double grow_fraction = 0.10;  // recent-mass share that marks growth
};

// Three-way call for a statistic observed at increasing prefixes
// (pairs of prefix length and statistic value, in increasing prefix
// order). Finite-prefix data can only support a trend heuristic, so
// the rules are conservative: supported needs a near-flat fit in the
// admissible direction, violated needs monotone degradation that is
// either large in total or steep in slope, anything else is
// inconclusive. Optionally reports the fitted log-log slope.
Verdict trend_verdict(const std::vector<std::pair<double, double>>& stats, Bound bound,
                      const TrendThresholds& tol, double* slope_out = nullptr);

struct FlatnessAssessment {
  Flatness verdict = Flatness::inconclusive;
  double total = 0.0;           // final partial sum
  double last_half_gain = 0.0;  // increment mass accumulated past the halfway index
  double slope = 0.0;           // fitted log-log slope of the increments
};

// Convergence call for a nonnegative series given its increments
// (increments[n] is the contribution at index n; entry 0 is ignored).
// Flat when the second-half mass is a negligible share of the total or
// the increments decay steeply enough to be integrable; growing when
// the decay is shallow and the recent mass is a sizable share.
FlatnessAssessment assess_flatness(const std::vector<double>& increments,
                                   const FlatnessThresholds& tol);

}  // namespace summakit
