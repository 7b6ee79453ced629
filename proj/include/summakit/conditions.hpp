#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "summakit/matrices.hpp"
#include "summakit/sequences.hpp"
#include "summakit/summability.hpp"
#include "summakit/trend.hpp"

namespace summakit {

// Catalog of membership conditions. Ids are part of the certificate
// wire format and stay stable.
enum class ConditionId {
  t1,        // sum_{i<n} |hat_step(n,i)| = O(phi_n)
  t2,        // max_{i<=n} |hat(n,i)| = O(phi_n)
  t3,        // sum_{n>i} alpha_n phi_n^{k-1} |hat_step(n,i)| = O(alpha_i phi_i^k)
  t4,        // sum_{n>i} alpha_n phi_n^{k-1} |hat(n,i+1)| = O(alpha_i phi_i^{k-1})
  a,         // sum alpha_n phi_n^k X_n^k |lambda_n|^k finite
  b,         // sum alpha_n phi_n^{k-1} X_n^k |lambda_n - lambda_{n+1}| finite
  n1,        // sum_{v<=n} |a_vv hat(n,v+1)| = O(phi_n)
  n2,        // |X_n - X_{n+1}| = O(phi_n) with X_n = phi_n / a_nn
  n11,       // sum_{v<=n} |hat(n,v+1) phi_v| = O(phi_n)
  n12,       // |X_n - X_{n+1}| = O(1/n) with X_n = 1/(n phi_n), X_0 = 0
  ta_i,      // entries nonincreasing down each column: a(n-1,v) >= a(n,v)
  ta_ii,     // tail_sum(n, 0) = 1 exactly
  ta_iii,    // sum_{1<=v<n} |a_vv hat(n,v+1)| = O(a_nn)
  ta_iv,     // |X_n - X_{n+1}| = O(1/n) with X_n = 1/(n a_nn), X_0 = 0
  ta_v,      // sum (theta_n a_nn)^{k-1} X_n^{k-1} (1/n) |lambda_n|^k finite
  ta_vi,     // sum (theta_n a_nn)^{k-1} X_n^k |lambda_n - lambda_{n+1}| finite
  ta_vii,    // sum_{n>v} (theta_n a_nn)^{k-1} |hat_step(n,v)| = O((theta_v a_vv)^{k-1} a_vv)
  ta_viii,   // sum_{n>v} (theta_n a_nn)^{k-1} |hat(n,v+1)| = O((theta_v a_vv)^{k-1})
  l4_i,      // tail_sum(n, 0) = 1 exactly
  l4_ii,     // entries nonincreasing down each column
  l4_iii,    // n * a_nn = O(1)
  l4_iv,     // sum_{n>v} alpha_n n^{1-k} |hat_step(n,v)| = O(alpha_v a_vv v^{1-k})
  l4_v,      // sum_{n>v} alpha_n n^{1-k} |hat(n,v+1)| = O(alpha_v v^{1-k})
  m1,        // sum_{n>v} alpha_n n^{1-k} w_n/(W_n W_{n-1}) = O(alpha_v v^{1-k} / W_v)
  lambda_ratio,  // |lambda_{n+1}| = O(|lambda_n|)
  qpd,       // {alpha_n phi_n^{k-1} / n} quasi power decreasing of the configured exponent
  npn,       // n * w_n = O(W_n)
  bv,        // sum |lambda_n - lambda_{n+1}| finite
};

const char* to_string(ConditionId id);
std::optional<ConditionId> condition_from_string(std::string_view s);

enum class ConditionKind {
  ratio,         // sampled ratio, sup/trend verdict
  tail_ratio,    // column tails up to a horizon, ratio verdict + truncation diagnostic
  partial_sum,   // series partials, flatness verdict
  exact,         // identity scanned over the whole prefix, sup of violations
  sequence_class,  // delegated to certify_sequence_class
};

struct ConditionSpec {
  ConditionId id{};
  ConditionKind kind{};
  std::string statement;               // human-readable relation
  std::vector<std::string> needs;      // required inputs by name
};

const std::vector<ConditionSpec>& catalog();

struct ConditionInputs {
  std::optional<TriangularMatrix> matrix;
  std::optional<RealSequence> alpha;   // summability weights
  std::optional<RealSequence> phi;     // positive scale sequence
  std::optional<RealSequence> lambda;  // factor sequence under test
  std::optional<RealSequence> factor;  // X sequence for the series conditions
  std::optional<RealSequence> theta;   // diagonal profile for the ta_* family
  double k = 2.0;
  double qpd_power = 0.5;              // exponent used by the qpd check
  std::string description;             // echoed into certificate params
};

struct ConditionTolerances {
  TrendThresholds trend;
  FlatnessThresholds flatness;
  double exact_tol = 1e-10;        // max violation an exact identity may show
  double truncation_limit = 0.05;  // last tail increment share that forces inconclusive
  double skip_limit = 0.10;        // skipped-sample share that forces inconclusive
};

struct ConditionCertificate {
  ConditionId id{};
  std::string params;
  std::int64_t prefix = 0;   // N: index range certified
  std::int64_t horizon = 0;  // M: tail horizon (equals prefix when unused)
  std::vector<std::pair<std::int64_t, double>> samples;
  double sup_ratio = 0.0;  // sup statistic; for exact conditions the sup violation
  double slope = 0.0;      // fitted trend slope (0 for exact conditions)
  Verdict verdict = Verdict::inconclusive;
  std::string notes;
};

// Evaluate one condition over indices up to `prefix`, with tail sums
// truncated at `horizon` (tail conditions require horizon >= 2 *
// prefix). Ratio statistics are sampled on a logarithmic grid, eight
// indices per octave, and the certificate records the samples used.
// Missing inputs raise config_error naming the condition and input.
ConditionCertificate evaluate_condition(ConditionId id, const ConditionInputs& in,
                                        std::int64_t prefix, std::int64_t horizon,
                                        const ConditionTolerances& tol = {});

// Weights and scale induced by a diagonal profile theta: alpha_n =
// theta_n^{k-1} and phi_n = a_nn. Under these inputs t3/t4 coincide
// with ta_vii/ta_viii sample by sample.
ConditionInputs inputs_from_theta_profile(const TriangularMatrix& m, const RealSequence& theta,
                                          double k);

// Canonical scale sequence for a matrix family: the diagonal entry for
// cesaro orders in (0, 1], n^-p for p_cesaro, 1/n for everything else
// (value 1 at n = 0 throughout).
RealSequence default_phi(const TriangularMatrix& m);

// Canonical X sequence: default_phi(n) divided by the diagonal entry
// for cesaro, rhaly and p_cesaro (constant 1, (n+1)/n, ((n+1)/n)^p
// respectively, value 1 at n = 0) and the constant 1 with a zero 0-term
// for riesz.
RealSequence default_factor(const TriangularMatrix& m);

// Named condition bundles.
enum class ScenarioId {
  lemma1,  // qpd + t1..t4 on a cesaro matrix
  lemma2,  // qpd + t1..t4 on a rhaly matrix
  lemma3,  // qpd + t1..t4 on a p_cesaro matrix
  lemma4,  // l4_i..l4_v
  thm1,    // a, b, n1, n2, lambda_ratio, bv
  thm2,    // a, b, n11, n12, lambda_ratio, bv
  thmA,    // ta_i..ta_viii
  thm6,    // npn, m1, n11, n12, a, b on a riesz matrix
  cor1,    // thm1-style bundle with power-log weights, phi = 1/n, X = 1, plus qpd
  cor2,    // same with phi = n^{-order}
};

const char* to_string(ScenarioId id);
std::optional<ScenarioId> scenario_from_string(std::string_view s);

struct ScenarioResult {
  ScenarioId id{};
  std::string params;
  std::vector<ConditionCertificate> certificates;
  Verdict bundle_verdict = Verdict::inconclusive;
  std::string notes;
};

// Evaluate a bundle. Scenario-specific defaults (phi and X choices,
// constraint checks on the matrix parameters) are applied here;
// constraint violations are flagged in the notes, not fatal.
ScenarioResult evaluate_scenario(ScenarioId id, const ConditionInputs& in, std::int64_t prefix,
                                 std::int64_t horizon, const ConditionTolerances& tol = {});

}  // namespace summakit
