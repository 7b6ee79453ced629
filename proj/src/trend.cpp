#include "summakit/trend.hpp"

#include <algorithm>
#include <cmath>

#include "summakit/numerics.hpp"

namespace summakit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::supported: return "supported";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(Flatness f) {
  switch (f) {
    case Flatness::flat: return "flat";
    case Flatness::growing: return "growing";
    case Flatness::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict trend_verdict(const std::vector<std::pair<double, double>>& stats, Bound bound,
                      const TrendThresholds& tol, double* slope_out) {
  if (slope_out) *slope_out = 0.0;
  if (stats.empty()) return Verdict::inconclusive;

  const double last = stats.back().second;
  if (!std::isfinite(last)) return Verdict::inconclusive;

  // All-zero statistics: nothing to bound above, nothing positive to
  // keep bounded below.
  const bool all_zero =
      std::all_of(stats.begin(), stats.end(), [](const auto& p) { return p.second == 0.0; });
  if (all_zero) return bound == Bound::above ? Verdict::supported : Verdict::inconclusive;

  const double slope = fit_loglog_slope(stats);
  if (slope_out) *slope_out = slope;

  if (bound == Bound::above ? slope <= tol.slope_ok_above : slope >= tol.slope_ok_below) {
    return Verdict::supported;
  }

  // Degradation: weakly monotone in the bad direction, strictly worse
  // overall, and either a large total factor or a steep fitted slope.
  bool monotone = true;
  for (std::size_t j = 1; j < stats.size(); ++j) {
    const double prev = stats[j - 1].second;
    const double cur = stats[j].second;
    if (bound == Bound::above ? cur < prev : cur > prev) {
      monotone = false;
      break;
    }
  }
  const double first = stats.front().second;
  const double tiny = 1e-300;
  const double factor = bound == Bound::above ? last / std::max(first, tiny)
                                              : first / std::max(last, tiny);
  const bool strictly_worse = bound == Bound::above ? last > first : last < first;
  const bool steep = bound == Bound::above ? slope >= tol.violation_slope
                                           : slope <= -tol.violation_slope;
  if (monotone && strictly_worse && (factor >= tol.violation_factor || steep)) {
    return Verdict::violated;
  }
  return Verdict::inconclusive;
}

FlatnessAssessment assess_flatness(const std::vector<double>& increments,
                                   const FlatnessThresholds& tol) {
  FlatnessAssessment out;
  const std::int64_t n = static_cast<std::int64_t>(increments.size());
  if (n < 2) {
    out.verdict = Flatness::inconclusive;
    return out;
  }

  CompensatedSum total;
  CompensatedSum tail;
  const std::int64_t half = n / 2;
  for (std::int64_t j = 1; j < n; ++j) {
    total.add(increments[j]);
    if (j > half) tail.add(increments[j]);
  }
  out.total = total.value();
  out.last_half_gain = tail.value();

  std::vector<std::pair<double, double>> pts;
  const std::int64_t lo = std::max<std::int64_t>(2, n / 8);
  std::size_t positive = 0;
  for (std::int64_t j = lo; j < n; ++j) {
    if (increments[j] > 0.0) ++positive;
    pts.emplace_back(static_cast<double>(j), increments[j]);
  }
  const bool slope_usable = positive >= 4;
  out.slope = slope_usable ? fit_loglog_slope(pts) : 0.0;

  const bool flat_by_gain = out.last_half_gain <= tol.gain_fraction * std::max(out.total, tol.gain_floor);
  const bool flat_by_slope = slope_usable && out.slope <= tol.flat_slope;
  if (flat_by_gain || flat_by_slope) {
    out.verdict = Flatness::flat;
  } else if (slope_usable && out.slope >= tol.grow_slope &&
             out.last_half_gain >= tol.grow_fraction * out.total && out.total > 0.0) {
    out.verdict = Flatness::growing;
  } else {
    out.verdict = Flatness::inconclusive;
  }
  return out;
}

}  // namespace summakit
