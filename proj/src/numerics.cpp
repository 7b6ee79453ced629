#include "summakit/numerics.hpp"

#include <cmath>

namespace summakit {

double pow_abs(double x, double k) {
  const double a = std::abs(x);
  if (a < 1e-300) return 0.0;
  if (k == 1.0) return a;
  return std::exp(k * std::log(a));
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> logs;
  logs.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
    logs.emplace_back(std::log(x), std::log(y));
    sx += logs.back().first;
    sy += logs.back().second;
  }
  if (logs.size() < 2) return 0.0;
  const double mx = sx / static_cast<double>(logs.size());
  const double my = sy / static_cast<double>(logs.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  if (sxx <= 0.0) return 0.0;
  return sxy / sxx;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double seeded_unit(std::uint64_t seed, std::int64_t n) {
  const std::uint64_t bits = splitmix64(seed ^ (0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(n + 1)));
  // 53 high bits -> [0, 1), then stretch to [-1, 1).
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double wrap_angle(double t) {
  double w = std::remainder(t, 2.0 * kPi);  // lands in [-pi, pi]
  if (w == kPi) w = -kPi;                   // keep the interval half-open
  return w;
}

}  // namespace summakit
