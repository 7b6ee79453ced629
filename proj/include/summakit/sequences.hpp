#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "summakit/trend.hpp"

namespace summakit {

// A named, pure map from nonnegative index to value. Everything the
// toolkit consumes or produces streamwise (weights, factor sequences,
// partial-sum views) is one of these; any state a builder needs is
// captured at construction, so evaluation is deterministic and safe to
// share across threads.
class RealSequence {
 public:
  RealSequence(std::string name, std::function<double(std::int64_t)> fn);

  // Throws std::domain_error for n < 0.
  double operator()(std::int64_t n) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(std::int64_t)> fn_;
};

// Generalized binomial coefficient of order alpha by the stable
// multiplicative recurrence value(0) = 1, value(n) = value(n-1) * (n +
// alpha) / n. Exact for integer alpha while products stay below 2^53;
// relative error grows only with accumulated rounding of the factors.
// Throws std::domain_error for alpha <= -1.
double cesaro_coeff(std::int64_t n, double alpha);

// Leading-order comparator n^alpha / Gamma(alpha + 1). Diagnostic
// companion to cesaro_coeff; agreement degrades like O(1/n).
double cesaro_coeff_asymptotic(std::int64_t n, double alpha);

enum class SequenceClass {
  almost_decreasing,       // seq(m) <= K * seq(n) for all n <= m, some K
  quasi_power_decreasing,  // n^power * seq(n) almost decreasing
  bounded_variation,       // sum |seq(n) - seq(n+1)| finite
  ratio_bounded,           // |seq(n+1)| = O(|seq(n)|)
};

const char* to_string(SequenceClass c);

struct SequenceClassCertificate {
  SequenceClass class_id{};
  double power = 0.0;  // exponent used for quasi_power_decreasing
  std::int64_t prefix = 0;
  double witness = 0.0;      // class statistic at the full prefix
  double trend_slope = 0.0;  // fitted slope of the statistic across prefixes
  Verdict verdict = Verdict::inconclusive;
  std::string notes;
};

// Finite-prefix membership check. The witness is the class statistic
// over seq(1..prefix): the minimum ratio seq(n)/max(seq(n..m)) for the
// decreasingness classes, the variation total for bounded_variation,
// and the maximum consecutive ratio for ratio_bounded. The statistic is
// re-measured at prefix/4 and prefix/2 and the three-point trend drives
// the verdict. Requires prefix >= 8; decreasingness classes require
// nonnegative terms (std::domain_error otherwise).
SequenceClassCertificate certify_sequence_class(const RealSequence& seq, SequenceClass cls,
                                                double power, std::int64_t prefix,
                                                const TrendThresholds& tol = {});

}  // namespace summakit
