#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "summakit/errors.hpp"
#include "summakit/runner.hpp"

namespace {

// Pulls "--name value" or "--name=value" out of argv without consuming
// it; preset and config files must apply before the regular flags so
// the flags can override what they set.
std::string prescan(int argc, char** argv, const std::string& name) {
  const std::string eq = name + "=";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == name && i + 1 < argc) return argv[i + 1];
    if (arg.rfind(eq, 0) == 0) return arg.substr(eq.size());
  }
  return {};
}

std::uint64_t parse_seed(const std::string& text) {
  char* end = nullptr;
  const std::uint64_t seed = std::strtoull(text.c_str(), &end, 0);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw summakit::config_error("malformed seed value: " + text);
  }
  return seed;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace summakit;

  RunConfig cfg;
  std::string seed_text;
  std::string preset_name;
  std::string config_path;

  try {
    if (const char* env = std::getenv("SUMMAKIT_DEFAULT_N")) {
      char* end = nullptr;
      const long long n = std::strtoll(env, &end, 10);
      if (*env == '\0' || *end != '\0' || n <= 0) {
        throw config_error(std::string("malformed SUMMAKIT_DEFAULT_N: ") + env);
      }
      cfg.prefix = n;
    }
    preset_name = prescan(argc, argv, "--preset");
    config_path = prescan(argc, argv, "--config");
    if (!preset_name.empty()) apply_preset(cfg, preset_name);
    if (!config_path.empty()) apply_config_file(cfg, config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"finite-prefix experiments for weighted absolute summability"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--N", cfg.prefix, "prefix length");
    sub->add_option("--M", cfg.horizon, "tail horizon (-1 resolves to 4*N)");
    sub->add_option("--k", cfg.k, "summability index, k >= 1");
    sub->add_option("--matrix", cfg.matrix, "cesaro | rhaly | p_cesaro | riesz");
    sub->add_option("--alpha", cfg.cesaro_alpha, "cesaro order");
    sub->add_option("--t", cfg.rhaly_t, "rhaly ratio, 0 < t < 1");
    sub->add_option("--p", cfg.pces_p, "p_cesaro exponent, p > 0");
    sub->add_option("--pn", cfg.pn, "riesz weight stream: ones | inv | id");
    sub->add_option("--weights", cfg.weights,
                    "weight preset: classic | cad | nbar | rpn | cor1");
    sub->add_option("--delta", cfg.delta, "weight preset delta");
    sub->add_option("--gamma", cfg.gamma, "weight preset gamma");
    sub->add_option("--lambda", cfg.lambda, "factor preset: invlog | one | invn | alt");
    sub->add_option("--X", cfg.x_choice, "X preset: auto | family | one");
    sub->add_option("--theta", cfg.theta, "theta preset: linear | one | sqrt");
    sub->add_option("--epsilon", cfg.epsilon, "quasi-power exponent");
    sub->add_option("--function", cfg.function_id,
                    "shape: zero | sawtooth | square | triangle | bump");
    sub->add_option("--g", cfg.g_function, "replacement shape for the localized band");
    sub->add_option("--x0", cfg.x0, "evaluation point");
    sub->add_option("--half-width", cfg.half_width, "agreement window half-width");
    sub->add_option("--terms", cfg.terms,
                    "term source: fourier | alternating | ones | seeded");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", seed_text, "RNG seed (decimal or 0x hex)");
    sub->add_option("--slope-tol", cfg.slope_tol, "admissible supported slope");
    sub->add_option("--flat-tol", cfg.flat_tol, "flatness gain fraction");
    sub->add_option("--quad-samples", cfg.quadrature_samples,
                    "quadrature evaluation budget (power of two)");
    sub->add_option("--config", config_path, "key = value parameter file");
    sub->add_option("--preset", preset_name, "parameter bundle: mohanty-demo");
  };

  CLI::App* sub_check =
      app.add_subcommand("check-class", "evaluate a named condition bundle");
  sub_check->add_option("--scenario", cfg.scenario,
                        "lemma1..lemma4, thm1, thm2, thmA, thm6, cor1, cor2");
  add_common(sub_check);

  CLI::App* sub_sum =
      app.add_subcommand("summability", "weighted increment total of a transformed series");
  add_common(sub_sum);

  CLI::App* sub_local =
      app.add_subcommand("local-experiment", "factored-series comparison at a point");
  add_common(sub_local);

  CLI::App* sub_validate =
      app.add_subcommand("validate", "re-check files this tool wrote");
  sub_validate->add_option("paths", cfg.validate_paths, "csv/json files to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!seed_text.empty()) cfg.seed = parse_seed(seed_text);
    if (sub_check->parsed()) {
      cfg.command = "check-class";
      if (cfg.scenario.empty()) throw config_error("check-class needs --scenario");
      return run_check_class(cfg);
    }
    if (sub_sum->parsed()) {
      cfg.command = "summability";
      return run_summability(cfg);
    }
    if (sub_local->parsed()) {
      cfg.command = "local-experiment";
      return run_local_experiment(cfg);
    }
    cfg.command = "validate";
    return run_validate(cfg);
  } catch (const precondition_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
