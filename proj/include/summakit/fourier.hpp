#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "summakit/conditions.hpp"
#include "summakit/matrices.hpp"
#include "summakit/sequences.hpp"
#include "summakit/summability.hpp"

namespace summakit {

// 2*pi-periodic real function with optional breakpoint metadata: the
// locations in [-pi, pi) where the shape has a jump or a kink. The
// quadrature engine aligns integration panels with breakpoints, which
// is what keeps coefficient accuracy for piecewise-smooth shapes.
// Functions constructed here have zero mean; a constant removed to
// achieve that is recorded and subtracted on evaluation.
class PeriodicFunction {
 public:
  PeriodicFunction(std::string name, std::function<double(double)> shape,
                   std::vector<double> breakpoints = {}, double removed_mean = 0.0);

  // Evaluates at wrap_angle(t), minus the removed mean.
  double operator()(double t) const;

  const std::string& name() const { return name_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool mean_removed() const { return true; }
  double removed_mean() const { return removed_mean_; }

 private:
  std::string name_;
  std::function<double(double)> shape_;
  std::vector<double> breakpoints_;  // sorted, in [-pi, pi)
  double removed_mean_ = 0.0;
};

// Built-in shapes on [-pi, pi), all zero-mean.
PeriodicFunction zero_function();
PeriodicFunction sawtooth();       // t / 2; jump at the period seam
PeriodicFunction square_wave();    // sign(t); jumps at 0 and the seam
PeriodicFunction triangle_wave();  // |t| - pi/2; kinks at 0 and the seam
PeriodicFunction bump();           // (1 - t^2)^3 on |t| <= 1, mean removed

PeriodicFunction difference(const PeriodicFunction& lhs, const PeriodicFunction& rhs);

// Replace f outside a neighbourhood of x0: the result equals f on
// (x0 - half_width, x0 + half_width), equals g outside (x0 -
// 2*half_width, x0 + 2*half_width), and blends with a cubic smoothstep
// (C^1) across the transition bands; the blend's mean is removed.
// Requires 0 < half_width < pi/2.
PeriodicFunction localize(const PeriodicFunction& f, double x0, double half_width,
                          const PeriodicFunction& g);

struct FourierSeries {
  std::int64_t max_order = 0;
  std::vector<double> cosine;  // index n = 1..max_order; entry 0 unused
  std::vector<double> sine;
  double removed_mean = 0.0;   // quadrature estimate of the input's mean

  RealSequence cosine_seq() const;
  RealSequence sine_seq() const;
};

// Cosine/sine coefficients up to max_order from `samples` function
// evaluations. `samples` must be a power of two and at least 4 *
// max_order (config_error otherwise). Functions with breakpoints are
// integrated with panel quadrature aligned to them; smooth functions
// use the uniform-grid rule.
FourierSeries coefficients(const PeriodicFunction& f, std::int64_t max_order,
                           std::int64_t samples);

FourierSeries coefficient_difference(const FourierSeries& lhs, const FourierSeries& rhs);

// Pointwise terms cosine[n] * cos(n x) + sine[n] * sin(n x); index 0
// and indices beyond max_order read 0.
RealSequence term_sequence(const FourierSeries& series, double x);

struct LocalPropertyResult {
  SummabilityReport base;        // series of f at x0
  SummabilityReport modified;    // series of g at x0
  SummabilityReport difference;  // coefficient differences at x0
  double agreement_offset = 0.0;   // constant by which f and g differ near x0
  double agreement_max_dev = 0.0;  // worst deviation from that constant
  std::vector<ConditionCertificate> factor_certificates;  // bv, lambda_ratio, a, b

  Flatness headline() const { return difference.verdict; }
};

// Factored-series comparison at a point: f and g must agree up to an
// additive constant on (x0 - half_width, x0 + half_width), checked at
// 128 sample points (precondition_error otherwise; constants are
// invisible to the order >= 1 coefficients, which is why they are
// allowed). Reports weighted-increment totals for the series of f, of
// g, and of f - g, factored through lambda and X, plus certificates
// for the factor sequence.
LocalPropertyResult local_property_experiment(
    const PeriodicFunction& f, const PeriodicFunction& g, double x0, double half_width,
    const TriangularMatrix& m, const RealSequence& alpha, const RealSequence& lambda,
    const RealSequence& factor, double k, std::int64_t prefix, std::int64_t quadrature_samples,
    const FlatnessThresholds& flat_tol = {}, const ConditionTolerances& cond_tol = {});

}  // namespace summakit
