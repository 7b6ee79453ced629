#include "summakit/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "summakit/numerics.hpp"

namespace summakit {

RealSequence::RealSequence(std::string name, std::function<double(std::int64_t)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {}

double RealSequence::operator()(std::int64_t n) const {
  if (n < 0) throw std::domain_error("sequence '" + name_ + "' evaluated at negative index");
  return fn_(n);
}

double cesaro_coeff(std::int64_t n, double alpha) {
  if (alpha <= -1.0) throw std::domain_error("cesaro_coeff requires alpha > -1");
  if (n < 0) throw std::domain_error("cesaro_coeff requires n >= 0");
  double value = 1.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    value = (value * (static_cast<double>(j) + alpha)) / static_cast<double>(j);
  }
  return value;
}

double cesaro_coeff_asymptotic(std::int64_t n, double alpha) {
  if (alpha <= -1.0) throw std::domain_error("cesaro_coeff_asymptotic requires alpha > -1");
  if (n < 1) throw std::domain_error("cesaro_coeff_asymptotic requires n >= 1");
  return std::pow(static_cast<double>(n), alpha) / std::tgamma(alpha + 1.0);
}

const char* to_string(SequenceClass c) {
  switch (c) {
    case SequenceClass::almost_decreasing: return "almost_decreasing";
    case SequenceClass::quasi_power_decreasing: return "quasi_power_decreasing";
    case SequenceClass::bounded_variation: return "bounded_variation";
    case SequenceClass::ratio_bounded: return "ratio_bounded";
  }
  return "unknown";
}

namespace {

// Minimum over 1 <= n <= m <= P of values[n] / values[m], computed
// right to left against the running suffix maximum. Equals 1/K for the
// smallest K with values[n] >= values[m] / K.
double decreasing_witness(const std::vector<double>& values, std::int64_t prefix) {
  double suffix_max = 0.0;
  double witness = std::numeric_limits<double>::infinity();
  for (std::int64_t n = prefix; n >= 1; --n) {
    suffix_max = std::max(suffix_max, values[static_cast<std::size_t>(n)]);
    if (suffix_max > 0.0) {
      witness = std::min(witness, values[static_cast<std::size_t>(n)] / suffix_max);
    }
  }
  return std::isfinite(witness) ? witness : 0.0;
}

double variation_witness(const std::vector<double>& values, std::int64_t prefix) {
  CompensatedSum total;
  for (std::int64_t n = 1; n < prefix; ++n) {
    total.add(std::abs(values[static_cast<std::size_t>(n)] -
                       values[static_cast<std::size_t>(n + 1)]));
  }
  return total.value();
}

double ratio_witness(const std::vector<double>& values, std::int64_t prefix, bool* any) {
  double worst = 0.0;
  *any = false;
  for (std::int64_t n = 1; n < prefix; ++n) {
    const double cur = std::abs(values[static_cast<std::size_t>(n)]);
    if (cur == 0.0) continue;
    *any = true;
    worst = std::max(worst, std::abs(values[static_cast<std::size_t>(n + 1)]) / cur);
  }
  return worst;
}

}  // namespace

SequenceClassCertificate certify_sequence_class(const RealSequence& seq, SequenceClass cls,
                                                double power, std::int64_t prefix,
                                                const TrendThresholds& tol) {
  if (prefix < 8) throw std::domain_error("certify_sequence_class requires prefix >= 8");

  const bool needs_nonneg = cls == SequenceClass::almost_decreasing ||
                            cls == SequenceClass::quasi_power_decreasing;

  std::vector<double> values(static_cast<std::size_t>(prefix) + 1, 0.0);
  for (std::int64_t n = 1; n <= prefix; ++n) {
    double v = seq(n);
    if (!std::isfinite(v)) {
      throw std::domain_error("certify_sequence_class: nonfinite term at n = " +
                              std::to_string(n));
    }
    if (needs_nonneg && v < 0.0) {
      throw std::domain_error("certify_sequence_class: negative term at n = " +
                              std::to_string(n));
    }
    if (cls == SequenceClass::quasi_power_decreasing) {
      v *= std::pow(static_cast<double>(n), power);
    }
    values[static_cast<std::size_t>(n)] = v;
  }

  SequenceClassCertificate cert;
  cert.class_id = cls;
  cert.power = cls == SequenceClass::quasi_power_decreasing ? power : 0.0;
  cert.prefix = prefix;

  const std::int64_t checkpoints[3] = {prefix / 4, prefix / 2, prefix};
  std::vector<std::pair<double, double>> stats;
  bool ratio_defined = true;
  for (std::int64_t p : checkpoints) {
    double w = 0.0;
    switch (cls) {
      case SequenceClass::almost_decreasing:
      case SequenceClass::quasi_power_decreasing:
        w = decreasing_witness(values, p);
        break;
      case SequenceClass::bounded_variation:
        w = variation_witness(values, p);
        break;
      case SequenceClass::ratio_bounded: {
        bool any = false;
        w = ratio_witness(values, p, &any);
        if (p == prefix && !any) ratio_defined = false;
        break;
      }
    }
    stats.emplace_back(static_cast<double>(p), w);
  }
  cert.witness = stats.back().second;

  if (!ratio_defined) {
    cert.verdict = Verdict::inconclusive;
    cert.notes = "ratio undefined: no nonzero terms in the prefix";
    return cert;
  }

  const Bound bound = needs_nonneg ? Bound::below : Bound::above;
  cert.verdict = trend_verdict(stats, bound, tol, &cert.trend_slope);

  if (cls == SequenceClass::bounded_variation && cert.verdict == Verdict::inconclusive) {
    // A variation total is a nondecreasing partial sum, so the flatness
    // rules apply verbatim and can rescue slowly-converging cases.
    std::vector<double> increments(static_cast<std::size_t>(prefix), 0.0);
    for (std::int64_t n = 1; n + 1 <= prefix; ++n) {
      increments[static_cast<std::size_t>(n)] =
          std::abs(values[static_cast<std::size_t>(n)] - values[static_cast<std::size_t>(n + 1)]);
    }
    const FlatnessAssessment flat = assess_flatness(increments, FlatnessThresholds{});
    if (flat.verdict == Flatness::flat) {
      cert.verdict = Verdict::supported;
      cert.notes = "variation increments flat";
    } else if (flat.verdict == Flatness::growing) {
      cert.verdict = Verdict::violated;
      cert.notes = "variation still accumulating";
    }
  }
  return cert;
}

}  // namespace summakit
