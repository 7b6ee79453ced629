#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "summakit/sequences.hpp"

namespace summakit {

enum class MatrixFamily { cesaro, rhaly, p_cesaro, riesz, custom };

const char* to_string(MatrixFamily f);

// Lower-triangular summability matrix presented as a pure entry map on
// 0 <= v <= n. The named families carry their defining parameters and
// lazily grown coefficient caches; caches are mutex-guarded so shared
// copies keep pure-function semantics under concurrent use. Copies are
// cheap and share state.
class TriangularMatrix {
 public:
  // Entries A(n-v, alpha-1) / A(n, alpha) with A the generalized
  // binomial coefficients; requires alpha > -1.
  static TriangularMatrix cesaro(double alpha);

  // Entries t^(n-v) / (n+1); requires 0 < t < 1.
  static TriangularMatrix rhaly(double t);

  // Constant rows 1 / (n+1)^p; requires p > 0.
  static TriangularMatrix p_cesaro(double p);

  // Entries w(v) / W(n) with W the running total of w; every consumed
  // weight must be finite and positive (checked on first access).
  static TriangularMatrix riesz(RealSequence weights);

  static TriangularMatrix custom(std::string name,
                                 std::function<double(std::int64_t, std::int64_t)> entry);

  // Throws std::out_of_range unless 0 <= v <= n.
  double entry(std::int64_t n, std::int64_t v) const;

  // out[v] = entry(n, v) for v = 0..n; one lock per row instead of one
  // per entry, which matters in the row-sweep loops.
  void row(std::int64_t n, std::vector<double>& out) const;

  MatrixFamily family() const { return family_; }
  const std::string& name() const { return name_; }

  double order() const { return order_; }        // cesaro alpha
  double ratio() const { return ratio_; }        // rhaly t
  double exponent() const { return exponent_; }  // p_cesaro p

  // Riesz accessors; prefix(-1) reads as 0. Throw std::logic_error for
  // other families.
  double riesz_weight(std::int64_t n) const;
  double riesz_prefix(std::int64_t n) const;

 private:
  TriangularMatrix() = default;
  struct CesaroState;
  struct RieszState;

  MatrixFamily family_ = MatrixFamily::custom;
  std::string name_;
  double order_ = 0.0;
  double ratio_ = 0.0;
  double exponent_ = 0.0;
  std::shared_ptr<CesaroState> cesaro_;
  std::shared_ptr<RieszState> riesz_;
  std::function<double(std::int64_t, std::int64_t)> custom_;
};

// Row tail sums of a triangular matrix and their differences:
//
//   tail_sum(n, v)  = sum of entry(n, r) for r = v..n
//   hat(n, v)       = tail_sum(n, v) - tail_sum(n-1, v)   (row -1 reads 0)
//   hat_step(n, i)  = hat(n, i) - hat(n, i+1)
//
// hat(n, n) coincides with the diagonal entry, and the steps telescope:
// sum of hat_step(n, i) over i < n equals hat(n, 0) - entry(n, n).
// Rows are built with compensated suffix sums; a small cache of recent
// rows makes sequential sweeps O(n) per row. Immutable and safe to
// share across threads.
class AssociatedMatrix {
 public:
  explicit AssociatedMatrix(TriangularMatrix m);

  std::vector<double> tail_sum_row(std::int64_t n) const;  // size n+1
  std::vector<double> hat_row(std::int64_t n) const;       // size n+1
  std::vector<double> hat_step_row(std::int64_t n) const;  // size n

  double tail_sum(std::int64_t n, std::int64_t v) const;
  double hat(std::int64_t n, std::int64_t v) const;
  double hat_step(std::int64_t n, std::int64_t i) const;

  const TriangularMatrix& matrix() const { return matrix_; }

 private:
  struct RowCache;
  std::shared_ptr<const std::vector<double>> tails(std::int64_t n) const;

  TriangularMatrix matrix_;
  std::shared_ptr<RowCache> cache_;
};

inline AssociatedMatrix derive(TriangularMatrix m) { return AssociatedMatrix(std::move(m)); }

// Family-specific closed forms for hat(n, v), n >= 1. Throws
// std::invalid_argument for custom matrices. These are independent
// reformulations used to cross-validate the generic rows.
double hat_closed_form(const TriangularMatrix& m, std::int64_t n, std::int64_t v);

// Closed forms for hat_step(n, i) where the family admits one
// (p_cesaro: column-independent; riesz: product form). Throws
// std::invalid_argument for the other families.
double hat_step_closed_form(const TriangularMatrix& m, std::int64_t n, std::int64_t i);

}  // namespace summakit
