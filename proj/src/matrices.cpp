#include "summakit/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "summakit/numerics.hpp"

namespace summakit {

const char* to_string(MatrixFamily f) {
  switch (f) {
    case MatrixFamily::cesaro: return "cesaro";
    case MatrixFamily::rhaly: return "rhaly";
    case MatrixFamily::p_cesaro: return "p_cesaro";
    case MatrixFamily::riesz: return "riesz";
    case MatrixFamily::custom: return "custom";
  }
  return "custom";
}

// Binomial coefficient arrays for the numerator order (alpha - 1) and
// the denominator order (alpha), grown on demand. The numerator order
// may lie at or below -1, where the public recurrence contract ends
// but the product recurrence itself is still the right continuation.
struct TriangularMatrix::CesaroState {
  double alpha = 0.0;
  mutable std::mutex mu;
  mutable std::vector<double> denom{1.0};  // A(n, alpha)
  mutable std::vector<double> numer{1.0};  // A(n, alpha - 1)

  void grow(std::int64_t n) const {
    for (std::int64_t j = static_cast<std::int64_t>(denom.size()); j <= n; ++j) {
      const double jj = static_cast<double>(j);
      denom.push_back((denom.back() * (jj + alpha)) / jj);
      numer.push_back((numer.back() * (jj + alpha - 1.0)) / jj);
    }
  }
};

struct TriangularMatrix::RieszState {
  RealSequence weights;
  mutable std::mutex mu;
  mutable std::vector<double> w;       // validated weights
  mutable std::vector<double> prefix;  // running totals of w
  mutable CompensatedSum acc;          // carries the compensation across grows

  explicit RieszState(RealSequence ws) : weights(std::move(ws)) {}

  void grow(std::int64_t n) const {
    for (std::int64_t j = static_cast<std::int64_t>(w.size()); j <= n; ++j) {
      const double x = weights(j);
      if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error("riesz weights '" + weights.name() +
                                "' must be positive and finite; offending index " +
                                std::to_string(j));
      }
      w.push_back(x);
      acc.add(x);
      prefix.push_back(acc.value());
    }
  }
};

TriangularMatrix TriangularMatrix::cesaro(double alpha) {
  if (!(alpha > -1.0)) throw std::domain_error("cesaro matrix requires alpha > -1");
  TriangularMatrix m;
  m.family_ = MatrixFamily::cesaro;
  m.name_ = "cesaro";
  m.order_ = alpha;
  m.cesaro_ = std::make_shared<CesaroState>();
  m.cesaro_->alpha = alpha;
  return m;
}

TriangularMatrix TriangularMatrix::rhaly(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("rhaly matrix requires 0 < t < 1");
  TriangularMatrix m;
  m.family_ = MatrixFamily::rhaly;
  m.name_ = "rhaly";
  m.ratio_ = t;
  return m;
}

TriangularMatrix TriangularMatrix::p_cesaro(double p) {
  if (!(p > 0.0)) throw std::domain_error("p_cesaro matrix requires p > 0");
  TriangularMatrix m;
  m.family_ = MatrixFamily::p_cesaro;
  m.name_ = "p_cesaro";
  m.exponent_ = p;
  return m;
}

TriangularMatrix TriangularMatrix::riesz(RealSequence weights) {
  TriangularMatrix m;
  m.family_ = MatrixFamily::riesz;
  m.name_ = "riesz";
  m.riesz_ = std::make_shared<RieszState>(std::move(weights));
  return m;
}

TriangularMatrix TriangularMatrix::custom(
    std::string name, std::function<double(std::int64_t, std::int64_t)> entry) {
  TriangularMatrix m;
  m.family_ = MatrixFamily::custom;
  m.name_ = std::move(name);
  m.custom_ = std::move(entry);
  return m;
}

double TriangularMatrix::entry(std::int64_t n, std::int64_t v) const {
  if (n < 0 || v < 0 || v > n) {
    throw std::out_of_range("matrix entry (" + std::to_string(n) + ", " + std::to_string(v) +
                            ") outside the lower triangle");
  }
  switch (family_) {
    case MatrixFamily::cesaro: {
      std::lock_guard<std::mutex> lock(cesaro_->mu);
      cesaro_->grow(n);
      return cesaro_->numer[static_cast<std::size_t>(n - v)] /
             cesaro_->denom[static_cast<std::size_t>(n)];
    }
    case MatrixFamily::rhaly:
      return std::pow(ratio_, static_cast<double>(n - v)) / static_cast<double>(n + 1);
    case MatrixFamily::p_cesaro:
      return 1.0 / std::pow(static_cast<double>(n + 1), exponent_);
    case MatrixFamily::riesz: {
      std::lock_guard<std::mutex> lock(riesz_->mu);
      riesz_->grow(n);
      return riesz_->w[static_cast<std::size_t>(v)] /
             riesz_->prefix[static_cast<std::size_t>(n)];
    }
    case MatrixFamily::custom:
      return custom_(n, v);
  }
  return 0.0;
}

void TriangularMatrix::row(std::int64_t n, std::vector<double>& out) const {
  if (n < 0) throw std::out_of_range("matrix row index must be nonnegative");
  out.resize(static_cast<std::size_t>(n) + 1);
  switch (family_) {
    case MatrixFamily::cesaro: {
      std::lock_guard<std::mutex> lock(cesaro_->mu);
      cesaro_->grow(n);
      const double d = cesaro_->denom[static_cast<std::size_t>(n)];
      for (std::int64_t v = 0; v <= n; ++v) {
        out[static_cast<std::size_t>(v)] = cesaro_->numer[static_cast<std::size_t>(n - v)] / d;
      }
      return;
    }
    case MatrixFamily::rhaly: {
      for (std::int64_t v = 0; v <= n; ++v) {
        out[static_cast<std::size_t>(v)] =
            std::pow(ratio_, static_cast<double>(n - v)) / static_cast<double>(n + 1);
      }
      return;
    }
    case MatrixFamily::p_cesaro: {
      const double e = 1.0 / std::pow(static_cast<double>(n + 1), exponent_);
      std::fill(out.begin(), out.end(), e);
      return;
    }
    case MatrixFamily::riesz: {
      std::lock_guard<std::mutex> lock(riesz_->mu);
      riesz_->grow(n);
      const double d = riesz_->prefix[static_cast<std::size_t>(n)];
      for (std::int64_t v = 0; v <= n; ++v) {
        out[static_cast<std::size_t>(v)] = riesz_->w[static_cast<std::size_t>(v)] / d;
      }
      return;
    }
    case MatrixFamily::custom: {
      for (std::int64_t v = 0; v <= n; ++v) {
        out[static_cast<std::size_t>(v)] = custom_(n, v);
      }
      return;
    }
  }
}

double TriangularMatrix::riesz_weight(std::int64_t n) const {
  if (family_ != MatrixFamily::riesz) {
    throw std::logic_error("riesz_weight queried on a non-riesz matrix");
  }
  if (n < 0) throw std::out_of_range("riesz_weight index must be nonnegative");
  std::lock_guard<std::mutex> lock(riesz_->mu);
  riesz_->grow(n);
  return riesz_->w[static_cast<std::size_t>(n)];
}

double TriangularMatrix::riesz_prefix(std::int64_t n) const {
  if (family_ != MatrixFamily::riesz) {
    throw std::logic_error("riesz_prefix queried on a non-riesz matrix");
  }
  if (n < 0) return 0.0;
  std::lock_guard<std::mutex> lock(riesz_->mu);
  riesz_->grow(n);
  return riesz_->prefix[static_cast<std::size_t>(n)];
}

// Small keyed store of recent tail-sum rows. Sequential sweeps touch
// rows n and n-1, so four slots with last-use eviction keep every hat
// computation O(n) without unbounded memory.
struct AssociatedMatrix::RowCache {
  struct Slot {
    std::int64_t n = -1;
    std::uint64_t tick = 0;
    std::shared_ptr<const std::vector<double>> tails;
  };
  mutable std::mutex mu;
  mutable std::array<Slot, 4> slots;
  mutable std::uint64_t tick = 0;
  mutable std::vector<double> scratch;
};

AssociatedMatrix::AssociatedMatrix(TriangularMatrix m)
    : matrix_(std::move(m)), cache_(std::make_shared<RowCache>()) {}

std::shared_ptr<const std::vector<double>> AssociatedMatrix::tails(std::int64_t n) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  ++cache_->tick;
  for (auto& slot : cache_->slots) {
    if (slot.n == n) {
      slot.tick = cache_->tick;
      return slot.tails;
    }
  }
  matrix_.row(n, cache_->scratch);
  auto tails = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) + 1);
  CompensatedSum acc;
  for (std::int64_t v = n; v >= 0; --v) {
    acc.add(cache_->scratch[static_cast<std::size_t>(v)]);
    (*tails)[static_cast<std::size_t>(v)] = acc.value();
  }
  auto* victim = &cache_->slots[0];
  for (auto& slot : cache_->slots) {
    if (slot.tick < victim->tick) victim = &slot;
  }
  victim->n = n;
  victim->tick = cache_->tick;
  victim->tails = tails;
  return tails;
}

std::vector<double> AssociatedMatrix::tail_sum_row(std::int64_t n) const {
  if (n < 0) throw std::out_of_range("tail_sum_row index must be nonnegative");
  return *tails(n);
}

std::vector<double> AssociatedMatrix::hat_row(std::int64_t n) const {
  if (n < 0) throw std::out_of_range("hat_row index must be nonnegative");
  const auto cur = tails(n);
  std::vector<double> hat(static_cast<std::size_t>(n) + 1);
  if (n == 0) {
    hat[0] = (*cur)[0];
    return hat;
  }
  const auto prev = tails(n - 1);
  for (std::int64_t v = 0; v <= n - 1; ++v) {
    hat[static_cast<std::size_t>(v)] =
        (*cur)[static_cast<std::size_t>(v)] - (*prev)[static_cast<std::size_t>(v)];
  }
  hat[static_cast<std::size_t>(n)] = (*cur)[static_cast<std::size_t>(n)];
  return hat;
}

std::vector<double> AssociatedMatrix::hat_step_row(std::int64_t n) const {
  if (n < 1) throw std::out_of_range("hat_step_row requires n >= 1");
  const std::vector<double> hat = hat_row(n);
  std::vector<double> step(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    step[static_cast<std::size_t>(i)] =
        hat[static_cast<std::size_t>(i)] - hat[static_cast<std::size_t>(i + 1)];
  }
  return step;
}

double AssociatedMatrix::tail_sum(std::int64_t n, std::int64_t v) const {
  if (n < 0 || v < 0 || v > n) {
    throw std::out_of_range("tail_sum (" + std::to_string(n) + ", " + std::to_string(v) +
                            ") outside the lower triangle");
  }
  return (*tails(n))[static_cast<std::size_t>(v)];
}

double AssociatedMatrix::hat(std::int64_t n, std::int64_t v) const {
  if (n < 0 || v < 0 || v > n) {
    throw std::out_of_range("hat (" + std::to_string(n) + ", " + std::to_string(v) +
                            ") outside the lower triangle");
  }
  if (v == n) return (*tails(n))[static_cast<std::size_t>(v)];
  return (*tails(n))[static_cast<std::size_t>(v)] -
         (*tails(n - 1))[static_cast<std::size_t>(v)];
}

double AssociatedMatrix::hat_step(std::int64_t n, std::int64_t i) const {
  if (n < 1 || i < 0 || i > n - 1) {
    throw std::out_of_range("hat_step (" + std::to_string(n) + ", " + std::to_string(i) +
                            ") out of range");
  }
  return hat(n, i) - hat(n, i + 1);
}

namespace {

// The cesaro_coeff recurrence without its domain gate: the numerator
// order alpha - 1 can sit at or below -1, where the product recurrence
// is still the right analytic continuation.
double binom_recurrence(std::int64_t n, double a) {
  double value = 1.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    value = (value * (static_cast<double>(j) + a)) / static_cast<double>(j);
  }
  return value;
}

}  // namespace

double hat_closed_form(const TriangularMatrix& m, std::int64_t n, std::int64_t v) {
  if (n < 1 || v < 0 || v > n) {
    throw std::out_of_range("hat_closed_form requires n >= 1 and 0 <= v <= n");
  }
  const double nn = static_cast<double>(n);
  const double vv = static_cast<double>(v);
  switch (m.family()) {
    case MatrixFamily::cesaro: {
      const double alpha = m.order();
      return vv * binom_recurrence(n - v, alpha - 1.0) / (nn * cesaro_coeff(n, alpha));
    }
    case MatrixFamily::rhaly: {
      const double t = m.ratio();
      const double up = 1.0 - std::pow(t, static_cast<double>(n - v + 1));
      const double dn = 1.0 - std::pow(t, static_cast<double>(n - v));
      return (up / (nn + 1.0) - dn / nn) / (1.0 - t);
    }
    case MatrixFamily::p_cesaro: {
      const double p = m.exponent();
      return (nn - vv + 1.0) / std::pow(nn + 1.0, p) - (nn - vv) / std::pow(nn, p);
    }
    case MatrixFamily::riesz: {
      return m.riesz_prefix(v - 1) * m.riesz_weight(n) /
             (m.riesz_prefix(n) * m.riesz_prefix(n - 1));
    }
    case MatrixFamily::custom:
      break;
  }
  throw std::invalid_argument("no closed form for matrix family '" + m.name() + "'");
}

double hat_step_closed_form(const TriangularMatrix& m, std::int64_t n, std::int64_t i) {
  if (n < 1 || i < 0 || i > n - 1) {
    throw std::out_of_range("hat_step_closed_form requires n >= 1 and 0 <= i <= n - 1");
  }
  const double nn = static_cast<double>(n);
  switch (m.family()) {
    case MatrixFamily::p_cesaro: {
      const double p = m.exponent();
      return 1.0 / std::pow(nn + 1.0, p) - 1.0 / std::pow(nn, p);
    }
    case MatrixFamily::riesz: {
      return -(m.riesz_weight(i) * m.riesz_weight(n)) /
             (m.riesz_prefix(n) * m.riesz_prefix(n - 1));
    }
    default:
      break;
  }
  throw std::invalid_argument("no step closed form for matrix family '" + m.name() + "'");
}

}  // namespace summakit
