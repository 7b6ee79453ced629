#include "summakit/conditions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "summakit/errors.hpp"
#include "summakit/numerics.hpp"

namespace summakit {

const char* to_string(ConditionId id) {
  switch (id) {
    case ConditionId::t1: return "T1";
    case ConditionId::t2: return "T2";
    case ConditionId::t3: return "T3";
    case ConditionId::t4: return "T4";
    case ConditionId::a: return "A";
    case ConditionId::b: return "B";
    case ConditionId::n1: return "N1";
    case ConditionId::n2: return "N2";
    case ConditionId::n11: return "N11";
    case ConditionId::n12: return "N12";
    case ConditionId::ta_i: return "TA_i";
    case ConditionId::ta_ii: return "TA_ii";
    case ConditionId::ta_iii: return "TA_iii";
    case ConditionId::ta_iv: return "TA_iv";
    case ConditionId::ta_v: return "TA_v";
    case ConditionId::ta_vi: return "TA_vi";
    case ConditionId::ta_vii: return "TA_vii";
    case ConditionId::ta_viii: return "TA_viii";
    case ConditionId::l4_i: return "L4_I";
    case ConditionId::l4_ii: return "L4_II";
    case ConditionId::l4_iii: return "L4_III";
    case ConditionId::l4_iv: return "L4_IV";
    case ConditionId::l4_v: return "L4_V";
    case ConditionId::m1: return "M1";
    case ConditionId::lambda_ratio: return "LAMBDA_RATIO";
    case ConditionId::qpd: return "QPD";
    case ConditionId::npn: return "NPN";
    case ConditionId::bv: return "BV";
  }
  return "?";
}

const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::lemma1: return "lemma1";
    case ScenarioId::lemma2: return "lemma2";
    case ScenarioId::lemma3: return "lemma3";
    case ScenarioId::lemma4: return "lemma4";
    case ScenarioId::thm1: return "thm1";
    case ScenarioId::thm2: return "thm2";
    case ScenarioId::thmA: return "thmA";
    case ScenarioId::thm6: return "thm6";
    case ScenarioId::cor1: return "cor1";
    case ScenarioId::cor2: return "cor2";
  }
  return "?";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

constexpr ConditionId kAllConditions[] = {
    ConditionId::t1,     ConditionId::t2,    ConditionId::t3,      ConditionId::t4,
    ConditionId::a,      ConditionId::b,     ConditionId::n1,      ConditionId::n2,
    ConditionId::n11,    ConditionId::n12,   ConditionId::ta_i,    ConditionId::ta_ii,
    ConditionId::ta_iii, ConditionId::ta_iv, ConditionId::ta_v,    ConditionId::ta_vi,
    ConditionId::ta_vii, ConditionId::ta_viii, ConditionId::l4_i,  ConditionId::l4_ii,
    ConditionId::l4_iii, ConditionId::l4_iv, ConditionId::l4_v,    ConditionId::m1,
    ConditionId::lambda_ratio, ConditionId::qpd, ConditionId::npn, ConditionId::bv,
};

constexpr ScenarioId kAllScenarios[] = {
    ScenarioId::lemma1, ScenarioId::lemma2, ScenarioId::lemma3, ScenarioId::lemma4,
    ScenarioId::thm1,   ScenarioId::thm2,   ScenarioId::thmA,   ScenarioId::thm6,
    ScenarioId::cor1,   ScenarioId::cor2,
};

}  // namespace

std::optional<ConditionId> condition_from_string(std::string_view s) {
  for (ConditionId id : kAllConditions) {
    if (iequals(s, to_string(id))) return id;
  }
  return std::nullopt;
}

std::optional<ScenarioId> scenario_from_string(std::string_view s) {
  for (ScenarioId id : kAllScenarios) {
    if (iequals(s, to_string(id))) return id;
  }
  return std::nullopt;
}

const std::vector<ConditionSpec>& catalog() {
  static const std::vector<ConditionSpec> specs = [] {
    std::vector<ConditionSpec> v;
    auto add = [&v](ConditionId id, ConditionKind kind, const char* statement,
                    std::vector<std::string> needs) {
      v.push_back(ConditionSpec{id, kind, statement, std::move(needs)});
    };
    add(ConditionId::t1, ConditionKind::ratio,
        "sum_{i<n} |hat_step(n,i)| = O(phi(n))", {"matrix", "phi"});
    add(ConditionId::t2, ConditionKind::ratio,
        "max_{i<=n} |hat(n,i)| = O(phi(n))", {"matrix", "phi"});
    add(ConditionId::t3, ConditionKind::tail_ratio,
        "sum_{n>i} alpha(n) phi(n)^(k-1) |hat_step(n,i)| = O(alpha(i) phi(i)^k)",
        {"matrix", "alpha", "phi", "k"});
    add(ConditionId::t4, ConditionKind::tail_ratio,
        "sum_{n>i} alpha(n) phi(n)^(k-1) |hat(n,i+1)| = O(alpha(i) phi(i)^(k-1))",
        {"matrix", "alpha", "phi", "k"});
    add(ConditionId::a, ConditionKind::partial_sum,
        "sum_n alpha(n) phi(n)^k X(n)^k |lambda(n)|^k finite",
        {"alpha", "phi", "factor", "lambda", "k"});
    add(ConditionId::b, ConditionKind::partial_sum,
        "sum_n alpha(n) phi(n)^(k-1) X(n)^k |lambda(n) - lambda(n+1)| finite",
        {"alpha", "phi", "factor", "lambda", "k"});
    add(ConditionId::n1, ConditionKind::ratio,
        "sum_{v<n} |diag(v) hat(n,v+1)| = O(phi(n))", {"matrix", "phi"});
    add(ConditionId::n2, ConditionKind::ratio,
        "|X(n) - X(n+1)| = O(phi(n)) with X(n) = phi(n)/diag(n)", {"matrix", "phi"});
    add(ConditionId::n11, ConditionKind::ratio,
        "sum_{v<n} |hat(n,v+1) phi(v)| = O(phi(n))", {"matrix", "phi"});
    add(ConditionId::n12, ConditionKind::ratio,
        "|X(n) - X(n+1)| = O(1/n) with X(n) = 1/(n phi(n)), X(0) = 0", {"phi"});
    add(ConditionId::ta_i, ConditionKind::exact,
        "entries nonincreasing down each column: entry(n-1,v) >= entry(n,v)", {"matrix"});
    add(ConditionId::ta_ii, ConditionKind::exact, "tail_sum(n,0) = 1", {"matrix"});
    add(ConditionId::ta_iii, ConditionKind::ratio,
        "sum_{1<=v<n} |diag(v) hat(n,v+1)| = O(diag(n))", {"matrix"});
    add(ConditionId::ta_iv, ConditionKind::ratio,
        "|X(n) - X(n+1)| = O(1/n) with X(n) = 1/(n diag(n)), X(0) = 0", {"matrix"});
    add(ConditionId::ta_v, ConditionKind::partial_sum,
        "sum_n (theta(n) diag(n))^(k-1) X(n)^(k-1) |lambda(n)|^k / n finite",
        {"matrix", "theta", "factor", "lambda", "k"});
    add(ConditionId::ta_vi, ConditionKind::partial_sum,
        "sum_n (theta(n) diag(n))^(k-1) X(n)^k |lambda(n) - lambda(n+1)| finite",
        {"matrix", "theta", "factor", "lambda", "k"});
    add(ConditionId::ta_vii, ConditionKind::tail_ratio,
        "sum_{n>v} (theta(n) diag(n))^(k-1) |hat_step(n,v)| = "
        "O((theta(v) diag(v))^(k-1) diag(v))",
        {"matrix", "theta", "k"});
    add(ConditionId::ta_viii, ConditionKind::tail_ratio,
        "sum_{n>v} (theta(n) diag(n))^(k-1) |hat(n,v+1)| = O((theta(v) diag(v))^(k-1))",
        {"matrix", "theta", "k"});
    add(ConditionId::l4_i, ConditionKind::exact, "tail_sum(n,0) = 1", {"matrix"});
    add(ConditionId::l4_ii, ConditionKind::exact,
        "entries nonincreasing down each column: entry(n-1,v) >= entry(n,v)", {"matrix"});
    add(ConditionId::l4_iii, ConditionKind::ratio, "n diag(n) = O(1)", {"matrix"});
    add(ConditionId::l4_iv, ConditionKind::tail_ratio,
        "sum_{n>v} alpha(n) n^(1-k) |hat_step(n,v)| = O(alpha(v) diag(v) v^(1-k))",
        {"matrix", "alpha", "k"});
    add(ConditionId::l4_v, ConditionKind::tail_ratio,
        "sum_{n>v} alpha(n) n^(1-k) |hat(n,v+1)| = O(alpha(v) v^(1-k))",
        {"matrix", "alpha", "k"});
    add(ConditionId::m1, ConditionKind::tail_ratio,
        "sum_{n>v} alpha(n) n^(1-k) w(n)/(W(n) W(n-1)) = O(alpha(v) v^(1-k) / W(v))",
        {"matrix:riesz", "alpha", "k"});
    add(ConditionId::lambda_ratio, ConditionKind::ratio,
        "|lambda(n+1)| = O(|lambda(n)|)", {"lambda"});
    add(ConditionId::qpd, ConditionKind::sequence_class,
        "{alpha(n) phi(n)^(k-1) / n} quasi power decreasing at the configured exponent",
        {"alpha", "phi", "k"});
    add(ConditionId::npn, ConditionKind::ratio, "n w(n) = O(W(n))", {"matrix:riesz"});
    add(ConditionId::bv, ConditionKind::partial_sum,
        "sum_n |lambda(n) - lambda(n+1)| finite", {"lambda"});
    return v;
  }();
  return specs;
}

namespace {

const ConditionSpec& spec_for(ConditionId id) {
  for (const auto& s : catalog()) {
    if (s.id == id) return s;
  }
  throw std::logic_error("condition missing from catalog");
}

const TriangularMatrix& need_matrix(const ConditionInputs& in, ConditionId id) {
  if (!in.matrix) {
    throw config_error(std::string("condition ") + to_string(id) + " needs input 'matrix'");
  }
  return *in.matrix;
}

const TriangularMatrix& need_riesz(const ConditionInputs& in, ConditionId id) {
  const TriangularMatrix& m = need_matrix(in, id);
  if (m.family() != MatrixFamily::riesz) {
    throw config_error(std::string("condition ") + to_string(id) +
                       " needs a riesz matrix; got family '" + m.name() + "'");
  }
  return m;
}

const RealSequence& need_seq(const std::optional<RealSequence>& s, const char* what,
                             ConditionId id) {
  if (!s) {
    throw config_error(std::string("condition ") + to_string(id) + " needs input '" + what +
                       "'");
  }
  return *s;
}

std::string matrix_label(const TriangularMatrix& m) {
  std::ostringstream os;
  os << m.name();
  switch (m.family()) {
    case MatrixFamily::cesaro: os << "(order=" << m.order() << ")"; break;
    case MatrixFamily::rhaly: os << "(ratio=" << m.ratio() << ")"; break;
    case MatrixFamily::p_cesaro: os << "(exponent=" << m.exponent() << ")"; break;
    case MatrixFamily::riesz: break;
    case MatrixFamily::custom: break;
  }
  return os.str();
}

std::string describe(const ConditionInputs& in) {
  std::ostringstream os;
  if (in.matrix) os << "matrix=" << matrix_label(*in.matrix) << "; ";
  if (in.alpha) os << "alpha=" << in.alpha->name() << "; ";
  if (in.phi) os << "phi=" << in.phi->name() << "; ";
  if (in.lambda) os << "lambda=" << in.lambda->name() << "; ";
  if (in.factor) os << "X=" << in.factor->name() << "; ";
  if (in.theta) os << "theta=" << in.theta->name() << "; ";
  os << "k=" << in.k;
  if (!in.description.empty()) os << "; " << in.description;
  return os.str();
}

// Logarithmic index grid, eight samples per octave from 4 up to and
// including `prefix`.
std::vector<std::int64_t> sample_grid(std::int64_t prefix) {
  std::vector<std::int64_t> out;
  const double step = std::pow(2.0, 1.0 / 8.0);
  double v = 4.0;
  std::int64_t last = 0;
  while (true) {
    const std::int64_t idx = std::llround(v);
    if (idx >= prefix) break;
    if (idx > last) {
      out.push_back(idx);
      last = idx;
    }
    v *= step;
  }
  if (last < prefix) out.push_back(prefix);
  return out;
}

struct Accumulated {
  std::vector<std::pair<std::int64_t, double>> samples;
  std::int64_t skipped = 0;
};

Accumulated collect_ratios(const std::vector<std::int64_t>& grid,
                           const std::function<double(std::int64_t)>& lhs,
                           const std::function<double(std::int64_t)>& rhs) {
  Accumulated acc;
  for (std::int64_t n : grid) {
    const double den = rhs(n);
    if (den == 0.0 || !std::isfinite(den)) {
      ++acc.skipped;
      continue;
    }
    const double ratio = lhs(n) / den;
    if (!std::isfinite(ratio)) {
      ++acc.skipped;
      continue;
    }
    acc.samples.emplace_back(n, ratio);
  }
  return acc;
}

void finish_ratio_certificate(ConditionCertificate& cert, const Accumulated& acc,
                              std::size_t grid_size, const ConditionTolerances& tol,
                              std::string rule_note) {
  cert.samples = acc.samples;
  cert.sup_ratio = 0.0;
  for (const auto& [idx, r] : acc.samples) {
    cert.sup_ratio = std::max(cert.sup_ratio, r);
  }
  std::vector<std::pair<double, double>> stats;
  stats.reserve(acc.samples.size());
  for (const auto& [idx, r] : acc.samples) {
    stats.emplace_back(static_cast<double>(idx), r);
  }
  cert.verdict = trend_verdict(stats, Bound::above, tol.trend, &cert.slope);
  std::ostringstream notes;
  notes << rule_note;
  if (acc.skipped > 0) {
    notes << "; skipped " << acc.skipped << "/" << grid_size
          << " samples with unusable denominators";
    if (static_cast<double>(acc.skipped) >
        tol.skip_limit * static_cast<double>(grid_size)) {
      cert.verdict = Verdict::inconclusive;
      notes << " (over the " << tol.skip_limit << " share limit)";
    }
  }
  cert.notes = notes.str();
}

enum class TailBody { step, hat_next, scalar };

ConditionCertificate tail_certificate(ConditionId id, const ConditionInputs& in,
                                      std::int64_t prefix, std::int64_t horizon,
                                      TailBody body,
                                      const std::function<double(std::int64_t)>& weight,
                                      const std::function<double(std::int64_t)>& scalar_inc,
                                      const std::function<double(std::int64_t)>& rhs,
                                      const ConditionTolerances& tol) {
  if (horizon < 2 * prefix) {
    throw config_error(std::string("condition ") + to_string(id) +
                       " needs a tail horizon of at least twice the prefix");
  }
  ConditionCertificate cert;
  cert.id = id;
  cert.params = describe(in);
  cert.prefix = prefix;
  cert.horizon = horizon;

  const std::vector<std::int64_t> grid = sample_grid(prefix);
  std::vector<CompensatedSum> tails(grid.size());
  std::vector<double> last_inc(grid.size(), 0.0);

  std::optional<AssociatedMatrix> assoc;
  if (body != TailBody::scalar) assoc.emplace(need_matrix(in, id));
  std::vector<double> rowbuf;
  for (std::int64_t n = grid.front() + 1; n <= horizon; ++n) {
    double w = 0.0;
    double scalar = 0.0;
    if (body == TailBody::scalar) {
      scalar = scalar_inc(n);
    } else {
      w = weight(n);
      rowbuf = body == TailBody::step ? assoc->hat_step_row(n) : assoc->hat_row(n);
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const std::int64_t i = grid[g];
      if (i >= n) break;
      double inc = 0.0;
      switch (body) {
        case TailBody::step:
          inc = w * std::abs(rowbuf[static_cast<std::size_t>(i)]);
          break;
        case TailBody::hat_next:
          inc = w * std::abs(rowbuf[static_cast<std::size_t>(i + 1)]);
          break;
        case TailBody::scalar:
          inc = scalar;
          break;
      }
      tails[g].add(inc);
      last_inc[g] = inc;
    }
  }

  Accumulated acc;
  double max_trunc = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::int64_t i = grid[g];
    const double den = rhs(i);
    if (den == 0.0 || !std::isfinite(den)) {
      ++acc.skipped;
      continue;
    }
    const double tail = tails[g].value();
    const double ratio = tail / den;
    if (!std::isfinite(ratio)) {
      ++acc.skipped;
      continue;
    }
    acc.samples.emplace_back(i, ratio);
    if (tail > 0.0) max_trunc = std::max(max_trunc, last_inc[g] / tail);
  }

  std::ostringstream rule;
  rule << "rule: tail-sum ratio on a log-spaced grid; truncation diagnostic " << max_trunc;
  finish_ratio_certificate(cert, acc, grid.size(), tol, rule.str());
  if (max_trunc > tol.truncation_limit) {
    cert.verdict = Verdict::inconclusive;
    cert.notes += "; tail truncation over the " + std::to_string(tol.truncation_limit) +
                  " limit, horizon too short for a verdict";
  }
  return cert;
}

ConditionCertificate partial_sum_certificate(ConditionId id, const ConditionInputs& in,
                                             std::int64_t prefix,
                                             const std::function<double(std::int64_t)>& inc_fn,
                                             const ConditionTolerances& tol,
                                             const char* extra_note) {
  ConditionCertificate cert;
  cert.id = id;
  cert.params = describe(in);
  cert.prefix = prefix;
  cert.horizon = prefix;

  std::vector<double> increments(static_cast<std::size_t>(prefix) + 1, 0.0);
  std::vector<double> partials(static_cast<std::size_t>(prefix) + 1, 0.0);
  CompensatedSum running;
  for (std::int64_t n = 1; n <= prefix; ++n) {
    const double inc = inc_fn(n);
    increments[static_cast<std::size_t>(n)] = inc;
    running.add(inc);
    partials[static_cast<std::size_t>(n)] = running.value();
  }

  const FlatnessAssessment flat = assess_flatness(increments, tol.flatness);
  cert.sup_ratio = flat.total;
  cert.slope = flat.slope;
  switch (flat.verdict) {
    case Flatness::flat: cert.verdict = Verdict::supported; break;
    case Flatness::growing: cert.verdict = Verdict::violated; break;
    case Flatness::inconclusive: cert.verdict = Verdict::inconclusive; break;
  }
  for (std::int64_t n : sample_grid(prefix)) {
    cert.samples.emplace_back(n, partials[static_cast<std::size_t>(n)]);
  }
  std::ostringstream notes;
  notes << "rule: partial-sum flatness; total " << flat.total << ", last-half gain "
        << flat.last_half_gain;
  if (extra_note && *extra_note) notes << "; " << extra_note;
  cert.notes = notes.str();
  return cert;
}

ConditionCertificate exact_certificate(ConditionId id, const ConditionInputs& in,
                                       std::int64_t prefix,
                                       const ConditionTolerances& tol) {
  ConditionCertificate cert;
  cert.id = id;
  cert.params = describe(in);
  cert.prefix = prefix;
  cert.horizon = prefix;

  const TriangularMatrix& m = need_matrix(in, id);
  double worst = 0.0;
  std::int64_t worst_n = 0;
  std::int64_t worst_v = 0;

  const bool column_monotone = id == ConditionId::ta_i || id == ConditionId::l4_ii;
  if (column_monotone) {
    std::vector<double> prev, cur;
    m.row(0, prev);
    for (std::int64_t n = 1; n <= prefix; ++n) {
      m.row(n, cur);
      for (std::int64_t v = 0; v <= n - 1; ++v) {
        const double gap = cur[static_cast<std::size_t>(v)] - prev[static_cast<std::size_t>(v)];
        if (gap > worst) {
          worst = gap;
          worst_n = n;
          worst_v = v;
        }
      }
      std::swap(prev, cur);
    }
  } else {
    const AssociatedMatrix assoc(m);
    for (std::int64_t n = 0; n <= prefix; ++n) {
      const double gap = std::abs(assoc.tail_sum(n, 0) - 1.0);
      if (gap > worst) {
        worst = gap;
        worst_n = n;
      }
    }
  }

  cert.sup_ratio = worst;
  cert.slope = 0.0;
  cert.verdict = worst <= tol.exact_tol ? Verdict::supported : Verdict::violated;
  for (std::int64_t n : sample_grid(prefix)) {
    if (column_monotone) {
      std::vector<double> prev, cur;
      m.row(n - 1, prev);
      m.row(n, cur);
      double row_worst = 0.0;
      for (std::int64_t v = 0; v <= n - 1; ++v) {
        row_worst = std::max(row_worst,
                             cur[static_cast<std::size_t>(v)] -
                                 prev[static_cast<std::size_t>(v)]);
      }
      cert.samples.emplace_back(n, row_worst);
    } else {
      cert.samples.emplace_back(n, std::abs(AssociatedMatrix(m).tail_sum(n, 0) - 1.0));
    }
  }
  std::ostringstream notes;
  notes << "rule: exact identity scan; worst violation " << worst << " at n = " << worst_n;
  if (column_monotone) notes << ", v = " << worst_v;
  cert.notes = notes.str();
  return cert;
}

// Diagonal entries cached up to `hi` inclusive.
std::vector<double> diagonal(const TriangularMatrix& m, std::int64_t hi) {
  std::vector<double> d(static_cast<std::size_t>(hi) + 1);
  for (std::int64_t n = 0; n <= hi; ++n) d[static_cast<std::size_t>(n)] = m.entry(n, n);
  return d;
}

std::vector<double> tabulate(const RealSequence& s, std::int64_t hi) {
  std::vector<double> v(static_cast<std::size_t>(hi) + 1);
  for (std::int64_t n = 0; n <= hi; ++n) v[static_cast<std::size_t>(n)] = s(n);
  return v;
}

}  // namespace

ConditionCertificate evaluate_condition(ConditionId id, const ConditionInputs& in,
                                        std::int64_t prefix, std::int64_t horizon,
                                        const ConditionTolerances& tol) {
  if (prefix < 8) throw config_error("condition evaluation needs prefix >= 8");
  const ConditionSpec& sp = spec_for(id);
  const double k = in.k;
  if (!(k >= 1.0)) throw config_error("condition evaluation needs k >= 1");

  const std::vector<std::int64_t> grid = sample_grid(prefix);

  auto ratio_cert = [&](const std::function<double(std::int64_t)>& lhs,
                        const std::function<double(std::int64_t)>& rhs) {
    ConditionCertificate cert;
    cert.id = id;
    cert.params = describe(in);
    cert.prefix = prefix;
    cert.horizon = prefix;
    const Accumulated acc = collect_ratios(grid, lhs, rhs);
    finish_ratio_certificate(cert, acc, grid.size(), tol,
                             "rule: sup/trend of ratios on a log-spaced grid");
    return cert;
  };

  switch (id) {
    case ConditionId::t1: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      AssociatedMatrix assoc(m);
      return ratio_cert(
          [&assoc](std::int64_t n) {
            CompensatedSum s;
            for (double x : assoc.hat_step_row(n)) s.add(std::abs(x));
            return s.value();
          },
          [&phi](std::int64_t n) { return phi(n); });
    }
    case ConditionId::t2: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      AssociatedMatrix assoc(m);
      return ratio_cert(
          [&assoc](std::int64_t n) {
            double worst = 0.0;
            for (double x : assoc.hat_row(n)) worst = std::max(worst, std::abs(x));
            return worst;
          },
          [&phi](std::int64_t n) { return phi(n); });
    }
    case ConditionId::t3: {
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      const std::vector<double> av = tabulate(alpha, horizon);
      const std::vector<double> pv = tabulate(phi, horizon);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::step,
          [&](std::int64_t n) {
            return av[static_cast<std::size_t>(n)] *
                   pow_abs(pv[static_cast<std::size_t>(n)], k - 1.0);
          },
          {},
          [&](std::int64_t i) {
            return av[static_cast<std::size_t>(i)] *
                   pow_abs(pv[static_cast<std::size_t>(i)], k);
          },
          tol);
    }
    case ConditionId::t4: {
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      const std::vector<double> av = tabulate(alpha, horizon);
      const std::vector<double> pv = tabulate(phi, horizon);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::hat_next,
          [&](std::int64_t n) {
            return av[static_cast<std::size_t>(n)] *
                   pow_abs(pv[static_cast<std::size_t>(n)], k - 1.0);
          },
          {},
          [&](std::int64_t i) {
            return av[static_cast<std::size_t>(i)] *
                   pow_abs(pv[static_cast<std::size_t>(i)], k - 1.0);
          },
          tol);
    }
    case ConditionId::a: {
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      const RealSequence& factor = need_seq(in.factor, "factor", id);
      const RealSequence& lambda = need_seq(in.lambda, "lambda", id);
      return partial_sum_certificate(
          id, in, prefix,
          [&](std::int64_t n) {
            return alpha(n) * pow_abs(phi(n), k) * pow_abs(factor(n), k) *
                   pow_abs(lambda(n), k);
          },
          tol, "");
    }
    case ConditionId::b: {
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      const RealSequence& factor = need_seq(in.factor, "factor", id);
      const RealSequence& lambda = need_seq(in.lambda, "lambda", id);
      return partial_sum_certificate(
          id, in, prefix,
          [&](std::int64_t n) {
            return alpha(n) * pow_abs(phi(n), k - 1.0) * pow_abs(factor(n), k) *
                   std::abs(lambda(n) - lambda(n + 1));
          },
          tol, "");
    }
    case ConditionId::n1: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      AssociatedMatrix assoc(m);
      const std::vector<double> diag = diagonal(m, prefix);
      return ratio_cert(
          [&](std::int64_t n) {
            const std::vector<double> hat = assoc.hat_row(n);
            CompensatedSum s;
            for (std::int64_t v = 0; v <= n - 1; ++v) {
              s.add(std::abs(diag[static_cast<std::size_t>(v)] *
                             hat[static_cast<std::size_t>(v + 1)]));
            }
            return s.value();
          },
          [&phi](std::int64_t n) { return phi(n); });
    }
    case ConditionId::n2: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      const std::vector<double> diag = diagonal(m, prefix + 1);
      const std::vector<double> pv = tabulate(phi, prefix + 1);
      auto x = [&](std::int64_t n) {
        return pv[static_cast<std::size_t>(n)] / diag[static_cast<std::size_t>(n)];
      };
      return ratio_cert(
          [x](std::int64_t n) { return std::abs(x(n) - x(n + 1)); },
          [&phi](std::int64_t n) { return phi(n); });
    }
    case ConditionId::n11: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      AssociatedMatrix assoc(m);
      const std::vector<double> pv = tabulate(phi, prefix);
      return ratio_cert(
          [&](std::int64_t n) {
            const std::vector<double> hat = assoc.hat_row(n);
            CompensatedSum s;
            for (std::int64_t v = 0; v <= n - 1; ++v) {
              s.add(std::abs(hat[static_cast<std::size_t>(v + 1)] *
                             pv[static_cast<std::size_t>(v)]));
            }
            return s.value();
          },
          [&phi](std::int64_t n) { return phi(n); });
    }
    case ConditionId::n12: {
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      const std::vector<double> pv = tabulate(phi, prefix + 1);
      auto x = [&](std::int64_t n) {
        if (n == 0) return 0.0;
        return 1.0 / (static_cast<double>(n) * pv[static_cast<std::size_t>(n)]);
      };
      return ratio_cert(
          [x](std::int64_t n) { return std::abs(x(n) - x(n + 1)); },
          [](std::int64_t n) { return 1.0 / static_cast<double>(n); });
    }
    case ConditionId::ta_i:
    case ConditionId::ta_ii:
    case ConditionId::l4_i:
    case ConditionId::l4_ii:
      return exact_certificate(id, in, prefix, tol);
    case ConditionId::ta_iii: {
      const TriangularMatrix& m = need_matrix(in, id);
      AssociatedMatrix assoc(m);
      const std::vector<double> diag = diagonal(m, prefix);
      return ratio_cert(
          [&](std::int64_t n) {
            const std::vector<double> hat = assoc.hat_row(n);
            CompensatedSum s;
            for (std::int64_t v = 1; v <= n - 1; ++v) {
              s.add(std::abs(diag[static_cast<std::size_t>(v)] *
                             hat[static_cast<std::size_t>(v + 1)]));
            }
            return s.value();
          },
          [&diag](std::int64_t n) { return diag[static_cast<std::size_t>(n)]; });
    }
    case ConditionId::ta_iv: {
      const TriangularMatrix& m = need_matrix(in, id);
      const std::vector<double> diag = diagonal(m, prefix + 1);
      auto x = [&](std::int64_t n) {
        if (n == 0) return 0.0;
        return 1.0 / (static_cast<double>(n) * diag[static_cast<std::size_t>(n)]);
      };
      return ratio_cert(
          [x](std::int64_t n) { return std::abs(x(n) - x(n + 1)); },
          [](std::int64_t n) { return 1.0 / static_cast<double>(n); });
    }
    case ConditionId::ta_v: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& theta = need_seq(in.theta, "theta", id);
      const RealSequence& factor = need_seq(in.factor, "factor", id);
      const RealSequence& lambda = need_seq(in.lambda, "lambda", id);
      const std::vector<double> diag = diagonal(m, prefix);
      return partial_sum_certificate(
          id, in, prefix,
          [&](std::int64_t n) {
            return pow_abs(theta(n) * diag[static_cast<std::size_t>(n)], k - 1.0) *
                   pow_abs(factor(n), k - 1.0) * pow_abs(lambda(n), k) /
                   static_cast<double>(n);
          },
          tol, "");
    }
    case ConditionId::ta_vi: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& theta = need_seq(in.theta, "theta", id);
      const RealSequence& factor = need_seq(in.factor, "factor", id);
      const RealSequence& lambda = need_seq(in.lambda, "lambda", id);
      const std::vector<double> diag = diagonal(m, prefix);
      return partial_sum_certificate(
          id, in, prefix,
          [&](std::int64_t n) {
            return pow_abs(theta(n) * diag[static_cast<std::size_t>(n)], k - 1.0) *
                   pow_abs(factor(n), k) * std::abs(lambda(n) - lambda(n + 1));
          },
          tol, "absolute values applied to the increments");
    }
    case ConditionId::ta_vii: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& theta = need_seq(in.theta, "theta", id);
      const std::vector<double> tv = tabulate(theta, horizon);
      const std::vector<double> diag = diagonal(m, horizon);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::step,
          [&](std::int64_t n) {
            return pow_abs(tv[static_cast<std::size_t>(n)] *
                               diag[static_cast<std::size_t>(n)],
                           k - 1.0);
          },
          {},
          [&](std::int64_t i) {
            return pow_abs(tv[static_cast<std::size_t>(i)] *
                               diag[static_cast<std::size_t>(i)],
                           k - 1.0) *
                   diag[static_cast<std::size_t>(i)];
          },
          tol);
    }
    case ConditionId::ta_viii: {
      const TriangularMatrix& m = need_matrix(in, id);
      const RealSequence& theta = need_seq(in.theta, "theta", id);
      const std::vector<double> tv = tabulate(theta, horizon);
      const std::vector<double> diag = diagonal(m, horizon);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::hat_next,
          [&](std::int64_t n) {
            return pow_abs(tv[static_cast<std::size_t>(n)] *
                               diag[static_cast<std::size_t>(n)],
                           k - 1.0);
          },
          {},
          [&](std::int64_t i) {
            return pow_abs(tv[static_cast<std::size_t>(i)] *
                               diag[static_cast<std::size_t>(i)],
                           k - 1.0);
          },
          tol);
    }
    case ConditionId::l4_iii: {
      const TriangularMatrix& m = need_matrix(in, id);
      const std::vector<double> diag = diagonal(m, prefix);
      return ratio_cert(
          [&diag](std::int64_t n) {
            return static_cast<double>(n) * diag[static_cast<std::size_t>(n)];
          },
          [](std::int64_t) { return 1.0; });
    }
    case ConditionId::l4_iv: {
      need_matrix(in, id);
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const std::vector<double> av = tabulate(alpha, horizon);
      const std::vector<double> diag = diagonal(*in.matrix, prefix);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::step,
          [&](std::int64_t n) {
            return av[static_cast<std::size_t>(n)] *
                   std::pow(static_cast<double>(n), 1.0 - k);
          },
          {},
          [&](std::int64_t i) {
            return av[static_cast<std::size_t>(i)] * diag[static_cast<std::size_t>(i)] *
                   std::pow(static_cast<double>(i), 1.0 - k);
          },
          tol);
    }
    case ConditionId::l4_v: {
      need_matrix(in, id);
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const std::vector<double> av = tabulate(alpha, horizon);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::hat_next,
          [&](std::int64_t n) {
            return av[static_cast<std::size_t>(n)] *
                   std::pow(static_cast<double>(n), 1.0 - k);
          },
          {},
          [&](std::int64_t i) {
            return av[static_cast<std::size_t>(i)] *
                   std::pow(static_cast<double>(i), 1.0 - k);
          },
          tol);
    }
    case ConditionId::m1: {
      const TriangularMatrix& m = need_riesz(in, id);
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const std::vector<double> av = tabulate(alpha, horizon);
      return tail_certificate(
          id, in, prefix, horizon, TailBody::scalar, {},
          [&](std::int64_t n) {
            return av[static_cast<std::size_t>(n)] *
                   std::pow(static_cast<double>(n), 1.0 - k) * m.riesz_weight(n) /
                   (m.riesz_prefix(n) * m.riesz_prefix(n - 1));
          },
          [&](std::int64_t i) {
            return av[static_cast<std::size_t>(i)] *
                   std::pow(static_cast<double>(i), 1.0 - k) / m.riesz_prefix(i);
          },
          tol);
    }
    case ConditionId::lambda_ratio: {
      const RealSequence& lambda = need_seq(in.lambda, "lambda", id);
      return ratio_cert(
          [&lambda](std::int64_t n) { return std::abs(lambda(n + 1)); },
          [&lambda](std::int64_t n) { return std::abs(lambda(n)); });
    }
    case ConditionId::qpd: {
      const RealSequence& alpha = need_seq(in.alpha, "alpha", id);
      const RealSequence& phi = need_seq(in.phi, "phi", id);
      RealSequence target("alpha*phi^(k-1)/n", [alpha, phi, k](std::int64_t n) {
        if (n == 0) return 0.0;
        return alpha(n) * pow_abs(phi(n), k - 1.0) / static_cast<double>(n);
      });
      const SequenceClassCertificate sc = certify_sequence_class(
          target, SequenceClass::quasi_power_decreasing, in.qpd_power, prefix, tol.trend);
      ConditionCertificate cert;
      cert.id = id;
      cert.params = describe(in);
      cert.prefix = prefix;
      cert.horizon = prefix;
      cert.sup_ratio = sc.witness;
      cert.slope = sc.trend_slope;
      cert.verdict = sc.verdict;
      std::ostringstream notes;
      notes << "rule: sequence-class witness (bounded below); exponent " << in.qpd_power;
      if (!sc.notes.empty()) notes << "; " << sc.notes;
      cert.notes = notes.str();
      cert.samples.emplace_back(prefix, sc.witness);
      return cert;
    }
    case ConditionId::npn: {
      const TriangularMatrix& m = need_riesz(in, id);
      return ratio_cert(
          [&m](std::int64_t n) { return static_cast<double>(n) * m.riesz_weight(n); },
          [&m](std::int64_t n) { return m.riesz_prefix(n); });
    }
    case ConditionId::bv: {
      const RealSequence& lambda = need_seq(in.lambda, "lambda", id);
      return partial_sum_certificate(
          id, in, prefix,
          [&lambda](std::int64_t n) { return std::abs(lambda(n) - lambda(n + 1)); },
          tol, "");
    }
  }
  throw config_error(std::string("condition ") + sp.statement + " not evaluable");
}

ConditionInputs inputs_from_theta_profile(const TriangularMatrix& m, const RealSequence& theta,
                                          double k) {
  ConditionInputs in;
  in.matrix = m;
  in.k = k;
  in.theta = theta;
  in.alpha = RealSequence("theta^(k-1)", [theta, k](std::int64_t n) {
    return pow_abs(theta(n), k - 1.0);
  });
  in.phi = RealSequence("diag", [m](std::int64_t n) { return m.entry(n, n); });
  in.description = "theta profile";
  return in;
}

RealSequence default_phi(const TriangularMatrix& m) {
  switch (m.family()) {
    case MatrixFamily::cesaro:
      if (m.order() > 0.0 && m.order() <= 1.0) {
        return RealSequence("diag", [m](std::int64_t n) { return m.entry(n, n); });
      }
      break;
    case MatrixFamily::p_cesaro: {
      const double p = m.exponent();
      return RealSequence("n^-p", [p](std::int64_t n) {
        return n == 0 ? 1.0 : std::pow(static_cast<double>(n), -p);
      });
    }
    default:
      break;
  }
  return RealSequence("1/n", [](std::int64_t n) {
    return n == 0 ? 1.0 : 1.0 / static_cast<double>(n);
  });
}

RealSequence default_factor(const TriangularMatrix& m) {
  switch (m.family()) {
    case MatrixFamily::rhaly:
      return RealSequence("(n+1)/n", [](std::int64_t n) {
        return n == 0 ? 1.0 : static_cast<double>(n + 1) / static_cast<double>(n);
      });
    case MatrixFamily::p_cesaro: {
      const double p = m.exponent();
      return RealSequence("((n+1)/n)^p", [p](std::int64_t n) {
        return n == 0 ? 1.0
                      : std::pow(static_cast<double>(n + 1) / static_cast<double>(n), p);
      });
    }
    case MatrixFamily::riesz:
      return RealSequence("one(0:0)", [](std::int64_t n) { return n == 0 ? 0.0 : 1.0; });
    case MatrixFamily::cesaro:
    case MatrixFamily::custom:
      break;
  }
  return RealSequence("one", [](std::int64_t) { return 1.0; });
}

namespace {

RealSequence x_from_phi(const RealSequence& phi) {
  return RealSequence("1/(n*phi)", [phi](std::int64_t n) {
    return n == 0 ? 0.0 : 1.0 / (static_cast<double>(n) * phi(n));
  });
}

void require_family(const ConditionInputs& in, ScenarioId id, MatrixFamily family) {
  if (!in.matrix) {
    throw config_error(std::string("scenario ") + to_string(id) + " needs a matrix");
  }
  if (in.matrix->family() != family) {
    throw config_error(std::string("scenario ") + to_string(id) + " needs a " +
                       to_string(family) + " matrix; got '" + in.matrix->name() + "'");
  }
}

}  // namespace

ScenarioResult evaluate_scenario(ScenarioId id, const ConditionInputs& in, std::int64_t prefix,
                                 std::int64_t horizon, const ConditionTolerances& tol) {
  ScenarioResult result;
  result.id = id;

  ConditionInputs local = in;
  std::vector<ConditionId> conds;
  std::ostringstream notes;

  switch (id) {
    case ScenarioId::lemma1: {
      require_family(local, id, MatrixFamily::cesaro);
      if (!local.phi) local.phi = default_phi(*local.matrix);
      if (local.matrix->order() <= 0.0) {
        notes << "order outside the certified range (needs order > 0); ";
      }
      conds = {ConditionId::qpd, ConditionId::t1, ConditionId::t2, ConditionId::t3,
               ConditionId::t4};
      break;
    }
    case ScenarioId::lemma2: {
      require_family(local, id, MatrixFamily::rhaly);
      if (!local.phi) local.phi = default_phi(*local.matrix);
      conds = {ConditionId::qpd, ConditionId::t1, ConditionId::t2, ConditionId::t3,
               ConditionId::t4};
      break;
    }
    case ScenarioId::lemma3: {
      require_family(local, id, MatrixFamily::p_cesaro);
      if (!local.phi) local.phi = default_phi(*local.matrix);
      const double p = local.matrix->exponent();
      if (!(p > 1.0 && p <= 2.0)) {
        notes << "exponent outside the certified band (needs 1 < p <= 2); ";
      }
      if (!(p - 2.0 + local.qpd_power > 0.0)) {
        notes << "exponent/power combination outside the certified band "
                 "(needs p - 2 + eps > 0); ";
      }
      conds = {ConditionId::qpd, ConditionId::t1, ConditionId::t2, ConditionId::t3,
               ConditionId::t4};
      break;
    }
    case ScenarioId::lemma4: {
      if (!local.matrix) throw config_error("scenario lemma4 needs a matrix");
      conds = {ConditionId::l4_i, ConditionId::l4_ii, ConditionId::l4_iii,
               ConditionId::l4_iv, ConditionId::l4_v};
      break;
    }
    case ScenarioId::thm1: {
      if (!local.matrix) throw config_error("scenario thm1 needs a matrix");
      if (!local.phi) local.phi = default_phi(*local.matrix);
      if (!local.factor) local.factor = default_factor(*local.matrix);
      conds = {ConditionId::a, ConditionId::b, ConditionId::n1, ConditionId::n2,
               ConditionId::lambda_ratio, ConditionId::bv};
      break;
    }
    case ScenarioId::thm2: {
      if (!local.matrix) throw config_error("scenario thm2 needs a matrix");
      if (!local.phi) local.phi = default_phi(*local.matrix);
      if (!local.factor) local.factor = x_from_phi(*local.phi);
      conds = {ConditionId::a, ConditionId::b, ConditionId::n11, ConditionId::n12,
               ConditionId::lambda_ratio, ConditionId::bv};
      break;
    }
    case ScenarioId::thmA: {
      if (!local.matrix) throw config_error("scenario thmA needs a matrix");
      if (!local.theta) {
        local.theta =
            RealSequence("n", [](std::int64_t n) { return static_cast<double>(n); });
      }
      if (!local.factor) local.factor = default_factor(*local.matrix);
      conds = {ConditionId::ta_i,  ConditionId::ta_ii,  ConditionId::ta_iii,
               ConditionId::ta_iv, ConditionId::ta_v,   ConditionId::ta_vi,
               ConditionId::ta_vii, ConditionId::ta_viii};
      break;
    }
    case ScenarioId::thm6: {
      require_family(local, id, MatrixFamily::riesz);
      if (!local.phi) local.phi = default_phi(*local.matrix);
      if (!local.factor) local.factor = x_from_phi(*local.phi);
      conds = {ConditionId::npn, ConditionId::m1, ConditionId::n11, ConditionId::n12,
               ConditionId::a, ConditionId::b};
      break;
    }
    case ScenarioId::cor1:
    case ScenarioId::cor2: {
      require_family(local, id, MatrixFamily::cesaro);
      if (!local.alpha) {
        throw config_error(std::string("scenario ") + to_string(id) +
                           " needs a weight sequence");
      }
      const double order = local.matrix->order();
      if (id == ScenarioId::cor1) {
        local.phi = RealSequence("1/n", [](std::int64_t n) {
          return n == 0 ? 1.0 : 1.0 / static_cast<double>(n);
        });
      } else {
        local.phi = RealSequence("n^-order", [order](std::int64_t n) {
          return n == 0 ? 1.0 : std::pow(static_cast<double>(n), -order);
        });
        if (!(order > 0.0 && order <= 1.0)) {
          notes << "order outside the certified band (needs 0 < order <= 1); ";
        }
      }
      local.factor = RealSequence("one", [](std::int64_t) { return 1.0; });
      conds = {ConditionId::qpd, ConditionId::a, ConditionId::b, ConditionId::n1,
               ConditionId::n2, ConditionId::lambda_ratio, ConditionId::bv};
      break;
    }
  }

  result.params = describe(local);
  for (ConditionId cid : conds) {
    result.certificates.push_back(evaluate_condition(cid, local, prefix, horizon, tol));
  }

  if (id == ScenarioId::thmA && local.matrix->family() == MatrixFamily::cesaro &&
      local.matrix->order() != 1.0) {
    for (const auto& cert : result.certificates) {
      if (cert.id == ConditionId::ta_ii && cert.verdict == Verdict::supported) {
        notes << "row-tail identity holds numerically at this order even though only "
                 "order 1 is classically expected to satisfy it; reported as computed; ";
      }
    }
  }

  bool any_violated = false;
  bool all_supported = true;
  for (const auto& cert : result.certificates) {
    if (cert.verdict == Verdict::violated) any_violated = true;
    if (cert.verdict != Verdict::supported) all_supported = false;
  }
  result.bundle_verdict = any_violated ? Verdict::violated
                          : all_supported ? Verdict::supported
                                          : Verdict::inconclusive;
  result.notes = notes.str();
  return result;
}

}  // namespace summakit
