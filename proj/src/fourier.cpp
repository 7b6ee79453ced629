#include "summakit/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "summakit/errors.hpp"
#include "summakit/numerics.hpp"

namespace summakit {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1], stored as the positive
// half; nodes come in +/- pairs and the eight weights sum to 1.
constexpr int kPanelNodes = 16;
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499,
};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541,
};

// Segments of one full period aligned to the breakpoints. Each segment
// is [lo, hi] with hi > lo; the lengths add up to 2*pi.
std::vector<std::pair<double, double>> period_segments(const std::vector<double>& breaks) {
  std::vector<std::pair<double, double>> segs;
  if (breaks.empty()) {
    segs.emplace_back(-kPi, kPi);
    return segs;
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) segs.emplace_back(breaks[i], breaks[i + 1]);
  }
  segs.emplace_back(breaks.back(), breaks.front() + 2.0 * kPi);
  return segs;
}

// Integral of fn over one period with GL panels aligned to the
// breakpoints, roughly `budget` evaluations in total.
double panel_integral(const std::function<double(double)>& fn,
                      const std::vector<double>& breaks, std::int64_t budget) {
  const auto segs = period_segments(breaks);
  const std::int64_t total_panels = std::max<std::int64_t>(budget / kPanelNodes, 1);
  CompensatedSum acc;
  for (const auto& [lo, hi] : segs) {
    const double len = hi - lo;
    const std::int64_t panels = std::max<std::int64_t>(
        std::llround(static_cast<double>(total_panels) * len / (2.0 * kPi)), 1);
    const double plen = len / static_cast<double>(panels);
    for (std::int64_t p = 0; p < panels; ++p) {
      const double mid = lo + plen * (static_cast<double>(p) + 0.5);
      const double half = plen / 2.0;
      for (int q = 0; q < 8; ++q) {
        const double dx = half * kGlNode[q];
        const double w = half * kGlWeight[q];
        acc.add(w * fn(mid - dx));
        acc.add(w * fn(mid + dx));
      }
    }
  }
  return acc.value();
}

std::vector<double> normalized_breakpoints(std::vector<double> breaks) {
  for (double& b : breaks) b = wrap_angle(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

std::vector<double> merged_breakpoints(const PeriodicFunction& a, const PeriodicFunction& b) {
  std::vector<double> out = a.breakpoints();
  out.insert(out.end(), b.breakpoints().begin(), b.breakpoints().end());
  return normalized_breakpoints(std::move(out));
}

}  // namespace

PeriodicFunction::PeriodicFunction(std::string name, std::function<double(double)> shape,
                                   std::vector<double> breakpoints, double removed_mean)
    : name_(std::move(name)),
      shape_(std::move(shape)),
      breakpoints_(normalized_breakpoints(std::move(breakpoints))),
      removed_mean_(removed_mean) {}

double PeriodicFunction::operator()(double t) const {
  return shape_(wrap_angle(t)) - removed_mean_;
}

PeriodicFunction zero_function() {
  return PeriodicFunction("zero", [](double) { return 0.0; });
}

PeriodicFunction sawtooth() {
  return PeriodicFunction("sawtooth", [](double t) { return t / 2.0; }, {-kPi});
}

PeriodicFunction square_wave() {
  return PeriodicFunction(
      "square", [](double t) { return t >= 0.0 ? 1.0 : -1.0; }, {-kPi, 0.0});
}

PeriodicFunction triangle_wave() {
  return PeriodicFunction(
      "triangle", [](double t) { return std::abs(t) - kPi / 2.0; }, {-kPi, 0.0});
}

PeriodicFunction bump() {
  // Mean of (1 - t^2)^3 on |t| <= 1 over the period: (32/35) / (2*pi).
  const double mean = 16.0 / (35.0 * kPi);
  return PeriodicFunction(
      "bump",
      [](double t) {
        if (std::abs(t) > 1.0) return 0.0;
        const double u = 1.0 - t * t;
        return u * u * u;
      },
      {-1.0, 1.0}, mean);
}

PeriodicFunction difference(const PeriodicFunction& lhs, const PeriodicFunction& rhs) {
  return PeriodicFunction(lhs.name() + "-" + rhs.name(),
                          [lhs, rhs](double t) { return lhs(t) - rhs(t); },
                          merged_breakpoints(lhs, rhs), 0.0);
}

PeriodicFunction localize(const PeriodicFunction& f, double x0, double half_width,
                          const PeriodicFunction& g) {
  if (!(half_width > 0.0) || !(half_width < kPi / 2.0)) {
    throw std::domain_error("localize needs 0 < half_width < pi/2");
  }
  const double cx = wrap_angle(x0);
  const double hw = half_width;
  auto blend = [f, g, cx, hw](double t) {
    const double d = std::abs(wrap_angle(t - cx));
    const double u = std::clamp((2.0 * hw - d) / hw, 0.0, 1.0);
    const double w = u * u * (3.0 - 2.0 * u);
    return w * f(t) + (1.0 - w) * g(t);
  };
  std::vector<double> breaks = merged_breakpoints(f, g);
  for (double edge : {cx - 2.0 * hw, cx - hw, cx + hw, cx + 2.0 * hw}) {
    breaks.push_back(wrap_angle(edge));
  }
  breaks = normalized_breakpoints(std::move(breaks));
  const double mean = panel_integral(blend, breaks, 4096) / (2.0 * kPi);
  return PeriodicFunction("local(" + f.name() + "," + g.name() + ")", blend, breaks, mean);
}

RealSequence FourierSeries::cosine_seq() const {
  const std::vector<double> vals = cosine;
  const std::int64_t hi = max_order;
  return RealSequence("cosine", [vals, hi](std::int64_t n) {
    if (n < 1 || n > hi) return 0.0;
    return vals[static_cast<std::size_t>(n)];
  });
}

RealSequence FourierSeries::sine_seq() const {
  const std::vector<double> vals = sine;
  const std::int64_t hi = max_order;
  return RealSequence("sine", [vals, hi](std::int64_t n) {
    if (n < 1 || n > hi) return 0.0;
    return vals[static_cast<std::size_t>(n)];
  });
}

FourierSeries coefficients(const PeriodicFunction& f, std::int64_t max_order,
                           std::int64_t samples) {
  if (max_order < 1) throw config_error("coefficients needs max_order >= 1");
  if (samples <= 0 || (samples & (samples - 1)) != 0) {
    throw config_error("coefficients needs a power-of-two sample count");
  }
  if (samples < 4 * max_order) {
    throw config_error("coefficients needs at least 4 * max_order samples");
  }

  FourierSeries out;
  out.max_order = max_order;
  out.cosine.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  out.sine.assign(static_cast<std::size_t>(max_order) + 1, 0.0);

  CompensatedSum mean_acc;
  // Accumulates fv * cos(n t) and fv * sin(n t) for every order with
  // one sine/cosine pair per evaluation point, advanced by rotation.
  auto accumulate = [&](double t, double weight) {
    const double fv = weight * f(t);
    mean_acc.add(fv);
    const double c1 = std::cos(t);
    const double s1 = std::sin(t);
    double cn = c1;
    double sn = s1;
    for (std::int64_t n = 1; n <= max_order; ++n) {
      out.cosine[static_cast<std::size_t>(n)] += fv * cn;
      out.sine[static_cast<std::size_t>(n)] += fv * sn;
      const double cnext = cn * c1 - sn * s1;
      sn = sn * c1 + cn * s1;
      cn = cnext;
    }
  };

  if (f.breakpoints().empty()) {
    const double step = 2.0 * kPi / static_cast<double>(samples);
    for (std::int64_t j = 0; j < samples; ++j) {
      accumulate(-kPi + step * static_cast<double>(j), step);
    }
  } else {
    const auto segs = period_segments(f.breakpoints());
    const std::int64_t total_panels = std::max<std::int64_t>(samples / kPanelNodes, 1);
    for (const auto& [lo, hi] : segs) {
      const double len = hi - lo;
      const std::int64_t budget_panels =
          std::llround(static_cast<double>(total_panels) * len / (2.0 * kPi));
      const std::int64_t oscillation_panels = static_cast<std::int64_t>(
          std::ceil(len * static_cast<double>(max_order) / 6.0));
      const std::int64_t panels =
          std::max<std::int64_t>({budget_panels, oscillation_panels, 1});
      const double plen = len / static_cast<double>(panels);
      for (std::int64_t p = 0; p < panels; ++p) {
        const double mid = lo + plen * (static_cast<double>(p) + 0.5);
        const double half = plen / 2.0;
        for (int q = 0; q < 8; ++q) {
          const double dx = half * kGlNode[q];
          const double w = half * kGlWeight[q];
          accumulate(mid - dx, w);
          accumulate(mid + dx, w);
        }
      }
    }
  }

  for (std::int64_t n = 1; n <= max_order; ++n) {
    out.cosine[static_cast<std::size_t>(n)] /= kPi;
    out.sine[static_cast<std::size_t>(n)] /= kPi;
  }
  out.removed_mean = mean_acc.value() / (2.0 * kPi);
  return out;
}

FourierSeries coefficient_difference(const FourierSeries& lhs, const FourierSeries& rhs) {
  FourierSeries out;
  out.max_order = std::min(lhs.max_order, rhs.max_order);
  out.cosine.assign(static_cast<std::size_t>(out.max_order) + 1, 0.0);
  out.sine.assign(static_cast<std::size_t>(out.max_order) + 1, 0.0);
  for (std::int64_t n = 1; n <= out.max_order; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.cosine[i] = lhs.cosine[i] - rhs.cosine[i];
    out.sine[i] = lhs.sine[i] - rhs.sine[i];
  }
  out.removed_mean = lhs.removed_mean - rhs.removed_mean;
  return out;
}

RealSequence term_sequence(const FourierSeries& series, double x) {
  const std::vector<double> a = series.cosine;
  const std::vector<double> b = series.sine;
  const std::int64_t hi = series.max_order;
  std::ostringstream name;
  name << "terms@" << x;
  return RealSequence(name.str(), [a, b, hi, x](std::int64_t n) {
    if (n < 1 || n > hi) return 0.0;
    const double ang = static_cast<double>(n) * x;
    const auto i = static_cast<std::size_t>(n);
    return a[i] * std::cos(ang) + b[i] * std::sin(ang);
  });
}

LocalPropertyResult local_property_experiment(
    const PeriodicFunction& f, const PeriodicFunction& g, double x0, double half_width,
    const TriangularMatrix& m, const RealSequence& alpha, const RealSequence& lambda,
    const RealSequence& factor, double k, std::int64_t prefix, std::int64_t quadrature_samples,
    const FlatnessThresholds& flat_tol, const ConditionTolerances& cond_tol) {
  constexpr double kAgreementTol = 1e-9;
  constexpr int kAgreementPoints = 128;

  LocalPropertyResult result;

  // f and g must differ by a constant on the window; the constant is
  // invisible to the order >= 1 coefficients.
  std::vector<double> devs(kAgreementPoints);
  CompensatedSum dev_mean;
  for (int j = 0; j < kAgreementPoints; ++j) {
    const double t = x0 - half_width +
                     2.0 * half_width * (static_cast<double>(j) + 0.5) /
                         static_cast<double>(kAgreementPoints);
    devs[static_cast<std::size_t>(j)] = f(t) - g(t);
    dev_mean.add(devs[static_cast<std::size_t>(j)]);
  }
  result.agreement_offset = dev_mean.value() / kAgreementPoints;
  result.agreement_max_dev = 0.0;
  for (double d : devs) {
    result.agreement_max_dev =
        std::max(result.agreement_max_dev, std::abs(d - result.agreement_offset));
  }
  if (result.agreement_max_dev > kAgreementTol) {
    std::ostringstream os;
    os << "functions do not agree up to a constant on the window around " << x0
       << "; max deviation " << result.agreement_max_dev;
    throw precondition_error(os.str());
  }

  ConditionInputs factor_in;
  factor_in.lambda = lambda;
  factor_in.k = k;
  const ConditionCertificate bv_cert =
      evaluate_condition(ConditionId::bv, factor_in, prefix, prefix, cond_tol);
  const ConditionCertificate ratio_cert =
      evaluate_condition(ConditionId::lambda_ratio, factor_in, prefix, prefix, cond_tol);
  if (bv_cert.verdict == Verdict::violated || ratio_cert.verdict == Verdict::violated) {
    const char* which = bv_cert.verdict == Verdict::violated
                            ? "bounded-variation check"
                            : "successor-ratio check";
    throw precondition_error(std::string("factor sequence fails its ") + which);
  }
  result.factor_certificates.push_back(bv_cert);
  result.factor_certificates.push_back(ratio_cert);

  ConditionInputs series_in = factor_in;
  series_in.matrix = m;
  series_in.alpha = alpha;
  series_in.phi = default_phi(m);
  series_in.factor = factor;
  result.factor_certificates.push_back(
      evaluate_condition(ConditionId::a, series_in, prefix, prefix, cond_tol));
  result.factor_certificates.push_back(
      evaluate_condition(ConditionId::b, series_in, prefix, prefix, cond_tol));

  const std::int64_t max_order = prefix - 1;
  const FourierSeries sf = coefficients(f, max_order, quadrature_samples);
  const FourierSeries sg = coefficients(g, max_order, quadrature_samples);
  const FourierSeries sd = coefficient_difference(sf, sg);

  result.base = summability_total(
      m, alpha, k, factored_terms(term_sequence(sf, x0), lambda, factor), prefix, flat_tol);
  result.modified = summability_total(
      m, alpha, k, factored_terms(term_sequence(sg, x0), lambda, factor), prefix, flat_tol);
  result.difference = summability_total(
      m, alpha, k, factored_terms(term_sequence(sd, x0), lambda, factor), prefix, flat_tol);
  return result;
}

}  // namespace summakit
