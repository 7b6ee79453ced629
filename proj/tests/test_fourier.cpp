#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "summakit/errors.hpp"
#include "summakit/fourier.hpp"
#include "summakit/numerics.hpp"

using namespace summakit;

namespace {

RealSequence ones() {
  return RealSequence("ones", [](std::int64_t) { return 1.0; });
}

RealSequence linear() {
  return RealSequence("n", [](std::int64_t n) { return static_cast<double>(n); });
}

RealSequence invlog() {
  return RealSequence("1/log(n+2)",
                      [](std::int64_t n) { return 1.0 / std::log(static_cast<double>(n) + 2.0); });
}

// Composite Simpson rule, deliberately independent of the library's
// panel quadrature. `intervals` must be even.
double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  double acc = f(lo) + f(hi);
  for (int j = 1; j < intervals; ++j) {
    acc += f(lo + h * j) * (j % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

double sawtooth_sine(std::int64_t n) {
  return (n % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(n);
}

double square_sine(std::int64_t n) {
  return n % 2 == 1 ? 4.0 / (kPi * static_cast<double>(n)) : 0.0;
}

double triangle_cosine(std::int64_t n) {
  return n % 2 == 1 ? -4.0 / (kPi * static_cast<double>(n) * static_cast<double>(n)) : 0.0;
}

}  // namespace

TEST_CASE("built-in shapes evaluate with their means removed") {
  const auto saw = sawtooth();
  CHECK(saw(1.0) == 0.5);
  CHECK(saw.removed_mean() == 0.0);
  CHECK(saw.breakpoints() == std::vector<double>{-kPi});
  // The seam wraps +pi back to -pi.
  CHECK(saw(kPi) == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
  CHECK(saw(1.0 + 2.0 * kPi) == doctest::Approx(0.5).epsilon(1e-12));

  const auto sq = square_wave();
  CHECK(sq(0.5) == 1.0);
  CHECK(sq(-0.5) == -1.0);
  CHECK(sq(0.0) == 1.0);
  CHECK(sq.breakpoints() == std::vector<double>{-kPi, 0.0});

  const auto tri = triangle_wave();
  CHECK(tri(0.0) == -kPi / 2.0);
  CHECK(tri(kPi / 2.0) == 0.0);
  CHECK(tri(1.3) == tri(-1.3));

  const auto bmp = bump();
  const double mean = 16.0 / (35.0 * kPi);
  CHECK(bmp.removed_mean() == doctest::Approx(mean).epsilon(1e-15));
  CHECK(bmp(0.0) == doctest::Approx(1.0 - mean).epsilon(1e-15));
  CHECK(bmp(2.0) == doctest::Approx(-mean).epsilon(1e-15));

  CHECK(zero_function()(0.7) == 0.0);

  const auto d = difference(saw, sq);
  CHECK(d.name() == "sawtooth-square");
  CHECK(d(0.5) == doctest::Approx(0.25 - 1.0).epsilon(1e-15));
  CHECK(d.breakpoints().size() == 2);
}

TEST_CASE("coefficient input validation") {
  const auto saw = sawtooth();
  CHECK_THROWS_AS(coefficients(saw, 0, 1024), config_error);
  CHECK_THROWS_AS(coefficients(saw, 4, 12), config_error);
  CHECK_THROWS_AS(coefficients(saw, 64, 128), config_error);
  CHECK_NOTHROW(coefficients(saw, 4, 16));
}

TEST_CASE("uniform rule is exact for trigonometric polynomials") {
  const PeriodicFunction f(
      "trigpoly", [](double t) { return std::cos(3.0 * t) + 0.25 * std::sin(5.0 * t); });
  REQUIRE(f.breakpoints().empty());
  const FourierSeries s = coefficients(f, 8, 1024);
  for (std::int64_t n = 1; n <= 8; ++n) {
    const double want_a = n == 3 ? 1.0 : 0.0;
    const double want_b = n == 5 ? 0.25 : 0.0;
    CHECK(std::abs(s.cosine[static_cast<std::size_t>(n)] - want_a) <= 1e-13);
    CHECK(std::abs(s.sine[static_cast<std::size_t>(n)] - want_b) <= 1e-13);
  }
  CHECK(std::abs(s.removed_mean) <= 1e-15);
}

TEST_CASE("panel rule reproduces the parabola coefficients") {
  // t^2 - pi^2/3 is zero-mean; its cosine coefficients are
  // 4 (-1)^n / n^2. The breakpoint forces the panel path.
  const PeriodicFunction f(
      "parabola", [](double t) { return t * t - kPi * kPi / 3.0; }, {-kPi});
  const FourierSeries s = coefficients(f, 16, 2048);
  for (std::int64_t n = 1; n <= 16; ++n) {
    const double want = 4.0 * (n % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(n * n);
    CHECK(std::abs(s.cosine[static_cast<std::size_t>(n)] - want) <= 1e-11);
    CHECK(std::abs(s.sine[static_cast<std::size_t>(n)]) <= 1e-11);
  }
  CHECK(std::abs(s.removed_mean) <= 1e-12);
}

TEST_CASE("sawtooth coefficients match the closed form") {
  const FourierSeries s = coefficients(sawtooth(), 64, 1 << 14);
  for (std::int64_t n = 1; n <= 64; ++n) {
    CHECK(std::abs(s.sine[static_cast<std::size_t>(n)] - sawtooth_sine(n)) <= 1e-8);
    CHECK(std::abs(s.cosine[static_cast<std::size_t>(n)]) <= 1e-10);
  }
  CHECK(std::abs(s.removed_mean) <= 1e-12);
}

TEST_CASE("square coefficients match the closed form") {
  const FourierSeries s = coefficients(square_wave(), 64, 1 << 14);
  for (std::int64_t n = 1; n <= 64; ++n) {
    CHECK(std::abs(s.sine[static_cast<std::size_t>(n)] - square_sine(n)) <= 1e-8);
    CHECK(std::abs(s.cosine[static_cast<std::size_t>(n)]) <= 1e-10);
  }
}

TEST_CASE("triangle coefficients match the closed form") {
  const FourierSeries s = coefficients(triangle_wave(), 48, 1 << 13);
  for (std::int64_t n = 1; n <= 48; ++n) {
    CHECK(std::abs(s.cosine[static_cast<std::size_t>(n)] - triangle_cosine(n)) <= 1e-8);
    CHECK(std::abs(s.sine[static_cast<std::size_t>(n)]) <= 1e-10);
  }
}

TEST_CASE("bump coefficients match an independent quadrature") {
  const FourierSeries s = coefficients(bump(), 8, 1 << 12);
  for (std::int64_t n = 1; n <= 8; ++n) {
    const double want = simpson(
                            [n](double t) {
                              const double u = 1.0 - t * t;
                              return u * u * u * std::cos(static_cast<double>(n) * t);
                            },
                            -1.0, 1.0, 4096) /
                        kPi;
    CHECK(std::abs(s.cosine[static_cast<std::size_t>(n)] - want) <= 1e-9);
    CHECK(std::abs(s.sine[static_cast<std::size_t>(n)]) <= 1e-12);
  }
  CHECK(std::abs(s.removed_mean) <= 1e-12);
}

TEST_CASE("refining the sample budget does not lose accuracy") {
  const FourierSeries coarse = coefficients(sawtooth(), 32, 1 << 10);
  const FourierSeries fine = coefficients(sawtooth(), 32, 1 << 14);
  double worst_coarse = 0.0, worst_fine = 0.0;
  for (std::int64_t n = 1; n <= 32; ++n) {
    worst_coarse = std::max(worst_coarse,
                            std::abs(coarse.sine[static_cast<std::size_t>(n)] - sawtooth_sine(n)));
    worst_fine = std::max(worst_fine,
                          std::abs(fine.sine[static_cast<std::size_t>(n)] - sawtooth_sine(n)));
  }
  CHECK(worst_fine <= worst_coarse + 1e-14);
  CHECK(worst_fine <= 1e-10);
}

TEST_CASE("coefficient differences are entrywise") {
  const FourierSeries sa = coefficients(sawtooth(), 24, 1 << 12);
  const FourierSeries sb = coefficients(square_wave(), 24, 1 << 12);
  const FourierSeries direct = coefficients(difference(sawtooth(), square_wave()), 24, 1 << 12);
  const FourierSeries diff = coefficient_difference(sa, sb);
  REQUIRE(diff.max_order == 24);
  for (std::int64_t n = 1; n <= 24; ++n) {
    const auto i = static_cast<std::size_t>(n);
    CHECK(diff.cosine[i] == sa.cosine[i] - sb.cosine[i]);
    CHECK(diff.sine[i] == sa.sine[i] - sb.sine[i]);
    CHECK(std::abs(direct.cosine[i] - diff.cosine[i]) <= 1e-10);
    CHECK(std::abs(direct.sine[i] - diff.sine[i]) <= 1e-10);
  }
  const FourierSeries shorter = coefficients(square_wave(), 10, 1 << 12);
  CHECK(coefficient_difference(sa, shorter).max_order == 10);
}

TEST_CASE("Parseval check for the sawtooth energy") {
  const FourierSeries s = coefficients(sawtooth(), 64, 1 << 14);
  CompensatedSum energy;
  CompensatedSum analytic;
  for (std::int64_t n = 1; n <= 64; ++n) {
    const auto i = static_cast<std::size_t>(n);
    energy.add(s.cosine[i] * s.cosine[i] + s.sine[i] * s.sine[i]);
    analytic.add(1.0 / (static_cast<double>(n) * static_cast<double>(n)));
  }
  CHECK(energy.value() == doctest::Approx(analytic.value()).epsilon(1e-8));
  // The partial energy sits below the full-series energy pi^2/6 by the
  // tail, which is between 1/65 and 1/64.
  const double full = kPi * kPi / 6.0;
  CHECK(full - energy.value() > 1.0 / 65.0);
  CHECK(full - energy.value() < 1.0 / 64.0);
}

TEST_CASE("term sequences evaluate the series pointwise") {
  const FourierSeries s = coefficients(sawtooth(), 16, 1 << 13);
  const RealSequence at_half_pi = term_sequence(s, kPi / 2.0);
  CHECK(at_half_pi(0) == 0.0);
  CHECK(at_half_pi(17) == 0.0);
  CHECK(at_half_pi(1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(at_half_pi(2)) <= 1e-8);
  CHECK(at_half_pi(3) == doctest::Approx(-1.0 / 3.0).epsilon(1e-7));
  CHECK(std::abs(at_half_pi(4)) <= 1e-8);
  CHECK(at_half_pi(5) == doctest::Approx(1.0 / 5.0).epsilon(1e-7));

  // The square wave is odd, so its series vanishes at the origin.
  const FourierSeries sq = coefficients(square_wave(), 16, 1 << 13);
  const RealSequence at_zero = term_sequence(sq, 0.0);
  for (std::int64_t n = 1; n <= 16; ++n) CHECK(std::abs(at_zero(n)) <= 1e-10);

  // |a cos + b sin| never exceeds the coefficient magnitude.
  for (double x : {0.3, 1.1, 2.7}) {
    const RealSequence terms = term_sequence(s, x);
    for (std::int64_t n = 1; n <= 16; ++n) {
      const auto i = static_cast<std::size_t>(n);
      const double bound = std::hypot(s.cosine[i], s.sine[i]);
      CHECK(std::abs(terms(n)) <= bound * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("coefficient sequences mirror the stored vectors") {
  const FourierSeries s = coefficients(triangle_wave(), 8, 256);
  const RealSequence a = s.cosine_seq();
  const RealSequence b = s.sine_seq();
  CHECK(a(0) == 0.0);
  CHECK(b(0) == 0.0);
  CHECK(a(9) == 0.0);
  CHECK(a(3) == s.cosine[3]);
  CHECK(b(5) == s.sine[5]);
}

TEST_CASE("localize keeps the inner shape and the outer fallback") {
  const auto saw = sawtooth();
  const auto sq = square_wave();
  const auto h = localize(saw, 0.3, 0.2, sq);

  // Inside the band the blend weight is exactly one, so adding back
  // the removed mean recovers the inner shape.
  for (double x : {0.15, 0.3, 0.45}) {
    CHECK(h(x) + h.removed_mean() == doctest::Approx(saw(x)).epsilon(1e-12));
  }
  // Beyond twice the half-width the weight is exactly zero.
  for (double x : {-2.0, -0.5, 1.5, 2.9}) {
    CHECK(h(x) + h.removed_mean() == doctest::Approx(sq(x)).epsilon(1e-12));
  }
  CHECK(h.removed_mean() != 0.0);

  const auto& breaks = h.breakpoints();
  CHECK(breaks.size() >= 6);
  for (std::size_t j = 1; j < breaks.size(); ++j) CHECK(breaks[j] > breaks[j - 1]);
  bool has_outer_edge = false;
  for (double b : breaks) {
    if (std::abs(b - 0.7) <= 1e-12) has_outer_edge = true;
  }
  CHECK(has_outer_edge);

  // The blend's own mean was removed: re-estimating it through the
  // coefficient quadrature lands at zero.
  CHECK(std::abs(coefficients(h, 8, 2048).removed_mean) <= 1e-9);

  CHECK_THROWS_AS(localize(saw, 0.3, 0.0, sq), std::domain_error);
  CHECK_THROWS_AS(localize(saw, 0.3, kPi / 2.0, sq), std::domain_error);
}

TEST_CASE("identical inputs give an exactly flat difference") {
  const auto saw = sawtooth();
  const auto m = TriangularMatrix::cesaro(1.0);
  const auto result = local_property_experiment(saw, saw, 1.0, 0.3, m, linear(), invlog(),
                                                ones(), 2.0, 64, 1024);
  CHECK(result.agreement_offset == 0.0);
  CHECK(result.agreement_max_dev == 0.0);
  CHECK(result.difference.total == 0.0);
  CHECK(result.headline() == Flatness::flat);
  REQUIRE(result.factor_certificates.size() == 4);
  CHECK(result.factor_certificates[0].id == ConditionId::bv);
  CHECK(result.factor_certificates[1].id == ConditionId::lambda_ratio);
  CHECK(result.factor_certificates[2].id == ConditionId::a);
  CHECK(result.factor_certificates[3].id == ConditionId::b);
  CHECK(result.base.total >= 0.0);
  CHECK(std::isfinite(result.base.total));
}

TEST_CASE("a localized fallback agrees up to the removed mean") {
  const auto saw = sawtooth();
  const auto g = localize(saw, 1.0, 0.3, square_wave());
  const auto m = TriangularMatrix::cesaro(1.0);
  const auto result = local_property_experiment(saw, g, 1.0, 0.3, m, linear(), invlog(),
                                                ones(), 2.0, 64, 2048);
  CHECK(result.agreement_offset == doctest::Approx(g.removed_mean()).epsilon(1e-12));
  CHECK(result.agreement_max_dev <= 1e-12);
  CHECK(std::isfinite(result.difference.total));
  CHECK(result.modified.total >= 0.0);
}

TEST_CASE("disagreeing shapes are rejected up front") {
  const auto saw = sawtooth();
  const auto tri = triangle_wave();
  const auto m = TriangularMatrix::cesaro(1.0);
  try {
    local_property_experiment(saw, tri, 1.0, 0.3, m, linear(), invlog(), ones(), 2.0, 64,
                              1024);
    FAIL("expected precondition_error");
  } catch (const precondition_error& e) {
    CHECK(std::string(e.what()).find("do not agree up to a constant") != std::string::npos);
  }
}

TEST_CASE("oscillating factor sequences are rejected") {
  const auto saw = sawtooth();
  const auto m = TriangularMatrix::cesaro(1.0);
  const RealSequence alt("(-1)^n", [](std::int64_t n) { return n % 2 == 0 ? 1.0 : -1.0; });
  try {
    local_property_experiment(saw, saw, 1.0, 0.3, m, linear(), alt, ones(), 2.0, 64, 1024);
    FAIL("expected precondition_error");
  } catch (const precondition_error& e) {
    CHECK(std::string(e.what()).find("bounded-variation check") != std::string::npos);
  }
}

TEST_CASE("factor sequences with runaway successor ratios are rejected") {
  const auto saw = sawtooth();
  const auto m = TriangularMatrix::cesaro(1.0);
  // Product of ratios r_j = 0.02 + 0.48 j/(j+32): the sequence decays
  // fast (variation is fine) while the ratio climbs by more than 4x
  // across the sampled range.
  const RealSequence runaway("ratio-climb", [](std::int64_t n) {
    double v = 1.0;
    for (std::int64_t j = 1; j <= n; ++j) {
      v *= 0.02 + 0.48 * static_cast<double>(j) / (static_cast<double>(j) + 32.0);
    }
    return v;
  });
  try {
    local_property_experiment(saw, saw, 1.0, 0.3, m, linear(), runaway, ones(), 2.0, 256,
                              2048);
    FAIL("expected precondition_error");
  } catch (const precondition_error& e) {
    CHECK(std::string(e.what()).find("successor-ratio check") != std::string::npos);
  }
}
