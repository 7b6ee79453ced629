#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "summakit/matrices.hpp"
#include "summakit/sequences.hpp"
#include "summakit/trend.hpp"

namespace summakit {

// Terms of a series together with their sequential partial sums. The
// partial sums are accumulated once and cached, so partial_sum(n) -
// partial_sum(n-1) reproduces term(n) exactly as the accumulation
// computed it. Copies share the cache; access is mutex-guarded.
class SeriesContext {
 public:
  explicit SeriesContext(RealSequence terms);

  double term(std::int64_t n) const;
  double partial_sum(std::int64_t n) const;

  RealSequence terms() const;
  RealSequence partial_sums() const;  // cached view, shares this context

 private:
  struct State;
  std::shared_ptr<State> state_;
};

// Termwise product coeffs(n) * lambda(n) * factor(n) as a context.
SeriesContext factored_terms(const RealSequence& coeffs, const RealSequence& lambda,
                             const RealSequence& factor);

// Row transform: sum of entry(n, v) * s(v) over v = 0..n.
double a_transform(const TriangularMatrix& m, const RealSequence& s, std::int64_t n);

struct SummabilityReport {
  double k = 1.0;
  std::int64_t prefix = 0;           // rows cover n in [0, prefix)
  std::vector<double> transform;     // T_n
  std::vector<double> increments;    // alpha(n) * |T_n - T_{n-1}|^k, entry 0 = 0
  std::vector<double> partials;      // running sums of the increments
  double total = 0.0;                // partials.back()
  double last_half_gain = 0.0;       // increment mass past the halfway index
  double increment_slope = 0.0;      // fitted log-log slope of the increments
  Flatness verdict = Flatness::inconclusive;
  double transform_cross_error = 0.0;   // max relative gap between the two T_n routes
  double max_abs_partial_sum = 0.0;     // sup |s_n| over the prefix (boundedness diagnostic)
};

// Weighted absolute-increment total of the transformed series: T_n is
// computed both as the tail-sum form (sum of tail_sum(n, i) * term(i))
// and as the row transform of the partial sums; the two routes are
// cross-checked and the report carries their worst relative gap.
// Requires k >= 1, prefix >= 4, and nonnegative finite weights.
SummabilityReport summability_total(const TriangularMatrix& m, const RealSequence& alpha,
                                    double k, const SeriesContext& ctx, std::int64_t prefix,
                                    const FlatnessThresholds& tol = {});

// Exact four-way split of T_n - T_{n-1} for a factored series, written
// against the partial sums s of the unfactored series (s(-1) reads 0,
// differences are u(i) - u(i+1)):
//
//   parts[0]  sum over i < n of hat(n, i+1) * (lambda(i) - lambda(i+1)) * X(i) * s(i)
//   parts[1]  sum over i < n of hat(n, i+1) * lambda(i+1) * (X(i) - X(i+1)) * s(i)
//   parts[2]  sum over i < n of hat_step(n, i) * lambda(i) * X(i) * s(i)
//   parts[3]  entry(n, n) * lambda(n) * X(n) * s(n)
//
// t_delta is evaluated independently as sum of hat(n, i) * lambda(i) *
// X(i) * (s(i) - s(i-1)), so the identity t_delta = parts sum is a
// genuine floating-point check, not a tautology. Requires n >= 1.
struct DecompositionRow {
  std::int64_t n = 0;
  double t_delta = 0.0;
  std::array<double, 4> parts{};
  double parts_sum() const { return parts[0] + parts[1] + parts[2] + parts[3]; }
};

DecompositionRow decomposition(const TriangularMatrix& m, const RealSequence& lambda,
                               const RealSequence& factor, const RealSequence& partial_sums,
                               std::int64_t n);

// Named weight presets.
//   classic: n^(k-1)
//   cad:     n^(dk + k - 1)
//   nbar:    (W(n)/w(n))^(dk + k - 1) for a positive weight stream w
//   rpn:     n^(dk + k - 1) (weighted-mean naming twin of cad)
//   cor1:    n^(dk + k - 1) * ln(max(n, 2))^g, with value 1 at n = 0
enum class WeightPreset { classic, cad, nbar, rpn, cor1 };

const char* to_string(WeightPreset p);

struct WeightParams {
  double k = 2.0;
  double delta = 0.0;
  double gamma = 0.0;
  std::optional<RealSequence> mean_weights;  // required by nbar
};

RealSequence preset_weights(WeightPreset preset, const WeightParams& params);

}  // namespace summakit
