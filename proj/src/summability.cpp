#include "summakit/summability.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "summakit/errors.hpp"
#include "summakit/numerics.hpp"

namespace summakit {

struct SeriesContext::State {
  RealSequence terms;
  std::mutex mu;
  std::vector<double> term_vals;
  std::vector<double> partials;

  explicit State(RealSequence t) : terms(std::move(t)) {}

  // Partial sums are defined by this plain sequential accumulation;
  // every consumer sees the same accumulated values.
  void grow(std::int64_t n) {
    for (std::int64_t j = static_cast<std::int64_t>(term_vals.size()); j <= n; ++j) {
      const double t = terms(j);
      term_vals.push_back(t);
      partials.push_back(j == 0 ? t : partials.back() + t);
    }
  }
};

SeriesContext::SeriesContext(RealSequence terms)
    : state_(std::make_shared<State>(std::move(terms))) {}

double SeriesContext::term(std::int64_t n) const {
  if (n < 0) throw std::domain_error("series term index must be nonnegative");
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->grow(n);
  return state_->term_vals[static_cast<std::size_t>(n)];
}

double SeriesContext::partial_sum(std::int64_t n) const {
  if (n < 0) throw std::domain_error("partial sum index must be nonnegative");
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->grow(n);
  return state_->partials[static_cast<std::size_t>(n)];
}

RealSequence SeriesContext::terms() const {
  auto self = *this;
  return RealSequence(state_->terms.name(), [self](std::int64_t n) { return self.term(n); });
}

RealSequence SeriesContext::partial_sums() const {
  auto self = *this;
  return RealSequence("partials(" + state_->terms.name() + ")",
                      [self](std::int64_t n) { return self.partial_sum(n); });
}

SeriesContext factored_terms(const RealSequence& coeffs, const RealSequence& lambda,
                             const RealSequence& factor) {
  return SeriesContext(RealSequence(
      coeffs.name() + "*" + lambda.name() + "*" + factor.name(),
      [coeffs, lambda, factor](std::int64_t n) { return coeffs(n) * lambda(n) * factor(n); }));
}

double a_transform(const TriangularMatrix& m, const RealSequence& s, std::int64_t n) {
  if (n < 0) throw std::domain_error("a_transform index must be nonnegative");
  std::vector<double> row;
  m.row(n, row);
  CompensatedSum acc;
  for (std::int64_t v = 0; v <= n; ++v) {
    acc.add(row[static_cast<std::size_t>(v)] * s(v));
  }
  return acc.value();
}

SummabilityReport summability_total(const TriangularMatrix& m, const RealSequence& alpha,
                                    double k, const SeriesContext& ctx, std::int64_t prefix,
                                    const FlatnessThresholds& tol) {
  if (!(k >= 1.0)) throw std::domain_error("summability_total requires k >= 1");
  if (prefix < 4) throw std::domain_error("summability_total requires prefix >= 4");

  SummabilityReport report;
  report.k = k;
  report.prefix = prefix;

  const std::size_t count = static_cast<std::size_t>(prefix);
  std::vector<double> terms(count), partials(count), weights(count);
  for (std::int64_t n = 0; n < prefix; ++n) {
    terms[static_cast<std::size_t>(n)] = ctx.term(n);
    partials[static_cast<std::size_t>(n)] = ctx.partial_sum(n);
    const double a = alpha(n);
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw std::domain_error("summability weights must be nonnegative and finite; index " +
                              std::to_string(n));
    }
    weights[static_cast<std::size_t>(n)] = a;
    report.max_abs_partial_sum =
        std::max(report.max_abs_partial_sum, std::abs(partials[static_cast<std::size_t>(n)]));
  }

  // Route one: transforms of the terms through the row tail sums.
  // Route two: the row transform of the partial sums. Route one is the
  // report's value; route two only cross-checks it.
  AssociatedMatrix assoc(m);
  report.transform.resize(count);
  report.transform_cross_error = 0.0;
  std::vector<double> row;
  for (std::int64_t n = 0; n < prefix; ++n) {
    const std::vector<double> tails = assoc.tail_sum_row(n);
    CompensatedSum via_tails;
    for (std::int64_t i = 0; i <= n; ++i) {
      via_tails.add(tails[static_cast<std::size_t>(i)] * terms[static_cast<std::size_t>(i)]);
    }
    const double t1 = via_tails.value();

    m.row(n, row);
    CompensatedSum via_rows;
    for (std::int64_t v = 0; v <= n; ++v) {
      via_rows.add(row[static_cast<std::size_t>(v)] * partials[static_cast<std::size_t>(v)]);
    }
    const double t2 = via_rows.value();

    report.transform[static_cast<std::size_t>(n)] = t1;
    const double gap = std::abs(t1 - t2) / std::max(1.0, std::abs(t1));
    report.transform_cross_error = std::max(report.transform_cross_error, gap);
  }

  report.increments.assign(count, 0.0);
  report.partials.assign(count, 0.0);
  CompensatedSum running;
  for (std::int64_t n = 1; n < prefix; ++n) {
    const double dt = report.transform[static_cast<std::size_t>(n)] -
                      report.transform[static_cast<std::size_t>(n - 1)];
    const double inc = weights[static_cast<std::size_t>(n)] * pow_abs(dt, k);
    report.increments[static_cast<std::size_t>(n)] = inc;
    running.add(inc);
    report.partials[static_cast<std::size_t>(n)] = running.value();
  }
  report.total = report.partials.back();

  const FlatnessAssessment flat = assess_flatness(report.increments, tol);
  report.verdict = flat.verdict;
  report.last_half_gain = flat.last_half_gain;
  report.increment_slope = flat.slope;
  return report;
}

DecompositionRow decomposition(const TriangularMatrix& m, const RealSequence& lambda,
                               const RealSequence& factor, const RealSequence& partial_sums,
                               std::int64_t n) {
  if (n < 1) throw std::domain_error("decomposition requires n >= 1");

  AssociatedMatrix assoc(m);
  const std::vector<double> hat = assoc.hat_row(n);

  DecompositionRow out;
  out.n = n;

  CompensatedSum p0, p1, p2, delta;
  double s_prev = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    const double s = partial_sums(i);
    const double li = lambda(i);
    const double ln = lambda(i + 1);
    const double xi = factor(i);
    const double xn = factor(i + 1);
    p0.add(hat[ii + 1] * (li - ln) * xi * s);
    p1.add(hat[ii + 1] * ln * (xi - xn) * s);
    p2.add((hat[ii] - hat[ii + 1]) * li * xi * s);
    delta.add(hat[ii] * li * xi * (s - s_prev));
    s_prev = s;
  }
  const double s_n = partial_sums(n);
  const double tail = m.entry(n, n) * lambda(n) * factor(n);
  delta.add(hat[static_cast<std::size_t>(n)] * lambda(n) * factor(n) * (s_n - s_prev));

  out.parts[0] = p0.value();
  out.parts[1] = p1.value();
  out.parts[2] = p2.value();
  out.parts[3] = tail * s_n;
  out.t_delta = delta.value();
  return out;
}

const char* to_string(WeightPreset p) {
  switch (p) {
    case WeightPreset::classic: return "classic";
    case WeightPreset::cad: return "cad";
    case WeightPreset::nbar: return "nbar";
    case WeightPreset::rpn: return "rpn";
    case WeightPreset::cor1: return "cor1";
  }
  return "classic";
}

RealSequence preset_weights(WeightPreset preset, const WeightParams& params) {
  if (!(params.k >= 1.0)) throw config_error("weight presets require k >= 1");
  if (params.delta < 0.0) throw config_error("weight presets require delta >= 0");
  const double e = params.delta * params.k + params.k - 1.0;

  switch (preset) {
    case WeightPreset::classic: {
      const double ek = params.k - 1.0;
      return RealSequence("n^" + std::to_string(ek), [ek](std::int64_t n) {
        return std::pow(static_cast<double>(n), ek);
      });
    }
    case WeightPreset::cad:
    case WeightPreset::rpn:
      return RealSequence("n^" + std::to_string(e), [e](std::int64_t n) {
        return std::pow(static_cast<double>(n), e);
      });
    case WeightPreset::nbar: {
      if (!params.mean_weights) {
        throw config_error("weight preset 'nbar' needs a mean-weight sequence");
      }
      SeriesContext ctx(*params.mean_weights);
      return RealSequence("(W/w)^" + std::to_string(e), [ctx, e](std::int64_t n) {
        return std::pow(ctx.partial_sum(n) / ctx.term(n), e);
      });
    }
    case WeightPreset::cor1: {
      const double g = params.gamma;
      return RealSequence(
          "n^" + std::to_string(e) + "*log^" + std::to_string(g), [e, g](std::int64_t n) {
            if (n == 0) return 1.0;
            const double base = std::pow(static_cast<double>(n), e);
            const double lg = std::log(static_cast<double>(std::max<std::int64_t>(n, 2)));
            return base * std::pow(lg, g);
          });
    }
  }
  throw config_error("unknown weight preset");
}

}  // namespace summakit
