#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace summakit {

// Exit codes shared by every subcommand.
inline constexpr int kExitSupported = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitViolated = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitPrecondition = 4;

// Fully resolved run configuration. Precedence, weakest first:
// compiled defaults, SUMMAKIT_DEFAULT_N, config file, command-line
// flags. String fields hold preset ids resolved by the runner.
struct RunConfig {
  std::string command;   // check-class | summability | local-experiment | validate
  std::string scenario;  // check-class bundle id

  std::int64_t prefix = 2048;   // N
  std::int64_t horizon = -1;    // M; -1 resolves to 4 * N

  double k = 2.0;

  std::string matrix = "cesaro";
  double cesaro_alpha = 1.0;
  double rhaly_t = 0.5;
  double pces_p = 2.0;
  std::string pn = "ones";  // riesz weights: ones | inv | id from presets

  std::string weights = "classic";  // classic | cad | nbar | rpn | cor1
  double delta = 0.0;
  double gamma = 0.0;

  std::string lambda = "invlog";  // invlog | one | invn | alt
  std::string x_choice = "auto";  // auto | one | family
  std::string theta = "linear";
  double epsilon = 0.5;  // quasi-power exponent for the qpd check

  std::string function_id = "square";  // fourier shape for summability/local runs
  std::string g_function;              // empty: localized zero modification
  double x0 = 1.5707963267948966;      // pi / 2
  double half_width = 0.3;
  std::string preset;  // local-experiment preset id (mohanty-demo)

  std::string terms = "fourier";  // summability term source: fourier | alternating | ones | seeded

  std::string out_dir = "out";
  std::uint64_t seed = 0x5EED;

  double slope_tol = 0.05;
  double flat_tol = 1e-3;

  std::int64_t quadrature_samples = 16384;

  std::vector<std::string> validate_paths;
};

// Applies `key = value` lines from a flat config file. Unknown keys
// and malformed values throw config_error. Returns the keys consumed.
std::vector<std::string> apply_config_file(RunConfig& cfg, const std::string& path);

// Applies a named parameter bundle. Presets sit between the
// environment and the config file in precedence, so both of those and
// explicit flags can override individual fields afterwards.
void apply_preset(RunConfig& cfg, const std::string& name);

int run_check_class(const RunConfig& cfg);
int run_summability(const RunConfig& cfg);
int run_local_experiment(const RunConfig& cfg);
int run_validate(const RunConfig& cfg);

}  // namespace summakit
