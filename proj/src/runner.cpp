#include "summakit/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "summakit/conditions.hpp"
#include "summakit/errors.hpp"
#include "summakit/fourier.hpp"
#include "summakit/matrices.hpp"
#include "summakit/numerics.hpp"
#include "summakit/report_io.hpp"
#include "summakit/sequences.hpp"
#include "summakit/summability.hpp"

namespace summakit {

namespace {

std::int64_t resolve_horizon(const RunConfig& cfg) {
  return cfg.horizon < 0 ? 4 * cfg.prefix : cfg.horizon;
}

RealSequence riesz_weight_stream(const std::string& id) {
  if (id == "ones") return RealSequence("ones", [](std::int64_t) { return 1.0; });
  if (id == "inv") {
    return RealSequence("1/(n+1)",
                        [](std::int64_t n) { return 1.0 / static_cast<double>(n + 1); });
  }
  if (id == "id") {
    return RealSequence("n+1", [](std::int64_t n) { return static_cast<double>(n + 1); });
  }
  throw config_error("unknown riesz weight stream '" + id + "' (ones, inv, id)");
}

TriangularMatrix make_matrix(const RunConfig& cfg) {
  if (cfg.matrix == "cesaro") return TriangularMatrix::cesaro(cfg.cesaro_alpha);
  if (cfg.matrix == "rhaly") return TriangularMatrix::rhaly(cfg.rhaly_t);
  if (cfg.matrix == "p_cesaro") return TriangularMatrix::p_cesaro(cfg.pces_p);
  if (cfg.matrix == "riesz") return TriangularMatrix::riesz(riesz_weight_stream(cfg.pn));
  throw config_error("unknown matrix family '" + cfg.matrix +
                     "' (cesaro, rhaly, p_cesaro, riesz)");
}

RealSequence make_lambda(const RunConfig& cfg) {
  if (cfg.lambda == "invlog") {
    return RealSequence("1/log(n+2)", [](std::int64_t n) {
      return 1.0 / std::log(static_cast<double>(n) + 2.0);
    });
  }
  if (cfg.lambda == "one") return RealSequence("one", [](std::int64_t) { return 1.0; });
  if (cfg.lambda == "invn") {
    return RealSequence("1/(n+1)",
                        [](std::int64_t n) { return 1.0 / static_cast<double>(n + 1); });
  }
  if (cfg.lambda == "alt") {
    return RealSequence("(-1)^n/(n+1)", [](std::int64_t n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      return sign / static_cast<double>(n + 1);
    });
  }
  throw config_error("unknown lambda preset '" + cfg.lambda + "' (invlog, one, invn, alt)");
}

RealSequence make_factor(const RunConfig& cfg, const TriangularMatrix& m) {
  if (cfg.x_choice == "auto" || cfg.x_choice == "family") return default_factor(m);
  if (cfg.x_choice == "one") return RealSequence("one", [](std::int64_t) { return 1.0; });
  throw config_error("unknown X preset '" + cfg.x_choice + "' (auto, family, one)");
}

RealSequence make_theta(const RunConfig& cfg) {
  if (cfg.theta == "linear") {
    return RealSequence("n", [](std::int64_t n) { return static_cast<double>(n); });
  }
  if (cfg.theta == "one") return RealSequence("one", [](std::int64_t) { return 1.0; });
  if (cfg.theta == "sqrt") {
    return RealSequence("sqrt(n)",
                        [](std::int64_t n) { return std::sqrt(static_cast<double>(n)); });
  }
  throw config_error("unknown theta preset '" + cfg.theta + "' (linear, one, sqrt)");
}

RealSequence make_weights(const RunConfig& cfg) {
  WeightParams params;
  params.k = cfg.k;
  params.delta = cfg.delta;
  params.gamma = cfg.gamma;
  WeightPreset preset;
  if (cfg.weights == "classic") {
    preset = WeightPreset::classic;
  } else if (cfg.weights == "cad") {
    preset = WeightPreset::cad;
  } else if (cfg.weights == "nbar") {
    preset = WeightPreset::nbar;
    params.mean_weights = riesz_weight_stream(cfg.pn);
  } else if (cfg.weights == "rpn") {
    preset = WeightPreset::rpn;
  } else if (cfg.weights == "cor1") {
    preset = WeightPreset::cor1;
  } else {
    throw config_error("unknown weight preset '" + cfg.weights +
                       "' (classic, cad, nbar, rpn, cor1)");
  }
  return preset_weights(preset, params);
}

PeriodicFunction make_function(const std::string& id) {
  if (id == "zero") return zero_function();
  if (id == "sawtooth") return sawtooth();
  if (id == "square") return square_wave();
  if (id == "triangle") return triangle_wave();
  if (id == "bump") return bump();
  throw config_error("unknown function '" + id +
                     "' (zero, sawtooth, square, triangle, bump)");
}

RealSequence make_terms(const RunConfig& cfg) {
  if (cfg.terms == "fourier") {
    const PeriodicFunction f = make_function(cfg.function_id);
    const FourierSeries series =
        coefficients(f, cfg.prefix - 1, cfg.quadrature_samples);
    return term_sequence(series, cfg.x0);
  }
  if (cfg.terms == "alternating") {
    return RealSequence("(-1)^n",
                        [](std::int64_t n) { return n % 2 == 0 ? 1.0 : -1.0; });
  }
  if (cfg.terms == "ones") return RealSequence("one", [](std::int64_t) { return 1.0; });
  if (cfg.terms == "seeded") {
    const std::uint64_t seed = cfg.seed;
    return RealSequence("seeded", [seed](std::int64_t n) { return seeded_unit(seed, n); });
  }
  throw config_error("unknown term source '" + cfg.terms +
                     "' (fourier, alternating, ones, seeded)");
}

ConditionTolerances make_cond_tol(const RunConfig& cfg) {
  ConditionTolerances tol;
  tol.trend.slope_ok_above = cfg.slope_tol;
  tol.flatness.gain_fraction = cfg.flat_tol;
  return tol;
}

FlatnessThresholds make_flat_tol(const RunConfig& cfg) {
  FlatnessThresholds tol;
  tol.gain_fraction = cfg.flat_tol;
  return tol;
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::supported: return kExitSupported;
    case Verdict::violated: return kExitViolated;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int flat_exit(Flatness f) {
  switch (f) {
    case Flatness::flat: return kExitSupported;
    case Flatness::growing: return kExitViolated;
    case Flatness::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

std::string report_block(const SummabilityReport& r, const std::string& pad) {
  std::string out = "{\n";
  out += pad + "  \"total\": " + format_sig17(r.total) + ",\n";
  out += pad + "  \"last_half_gain\": " + format_sig17(r.last_half_gain) + ",\n";
  out += pad + "  \"increment_slope\": " + format_sig17(r.increment_slope) + ",\n";
  out += pad + "  \"verdict\": \"" + std::string(to_string(r.verdict)) + "\"\n";
  out += pad + "}";
  return out;
}

}  // namespace

std::vector<std::string> apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path);

  auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t");
    if (from == std::string::npos) return std::string();
    const auto to = s.find_last_not_of(" \t");
    return s.substr(from, to - from + 1);
  };
  auto as_double = [&](const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw config_error("config key '" + key + "' has a malformed number: " + value);
    }
    return x;
  };
  auto as_int = [&](const std::string& key, const std::string& value) {
    const double x = as_double(key, value);
    const auto n = static_cast<std::int64_t>(x);
    if (static_cast<double>(n) != x) {
      throw config_error("config key '" + key + "' needs an integer: " + value);
    }
    return n;
  };

  std::vector<std::string> consumed;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "N") cfg.prefix = as_int(key, value);
    else if (key == "M") cfg.horizon = as_int(key, value);
    else if (key == "k") cfg.k = as_double(key, value);
    else if (key == "matrix") cfg.matrix = value;
    else if (key == "alpha") cfg.cesaro_alpha = as_double(key, value);
    else if (key == "t") cfg.rhaly_t = as_double(key, value);
    else if (key == "p") cfg.pces_p = as_double(key, value);
    else if (key == "pn") cfg.pn = value;
    else if (key == "weights") cfg.weights = value;
    else if (key == "delta") cfg.delta = as_double(key, value);
    else if (key == "gamma") cfg.gamma = as_double(key, value);
    else if (key == "lambda") cfg.lambda = value;
    else if (key == "X") cfg.x_choice = value;
    else if (key == "theta") cfg.theta = value;
    else if (key == "epsilon") cfg.epsilon = as_double(key, value);
    else if (key == "function") cfg.function_id = value;
    else if (key == "g") cfg.g_function = value;
    else if (key == "x0") cfg.x0 = as_double(key, value);
    else if (key == "half_width") cfg.half_width = as_double(key, value);
    else if (key == "terms") cfg.terms = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "scenario") cfg.scenario = value;
    else if (key == "seed") {
      char* end = nullptr;
      cfg.seed = std::strtoull(value.c_str(), &end, 0);
      if (value.empty() || end != value.c_str() + value.size()) {
        throw config_error("config key 'seed' has a malformed value: " + value);
      }
    } else if (key == "slope_tol") cfg.slope_tol = as_double(key, value);
    else if (key == "flat_tol") cfg.flat_tol = as_double(key, value);
    else if (key == "quad_samples") cfg.quadrature_samples = as_int(key, value);
    else throw config_error("unknown config key '" + key + "' in " + path);
    consumed.push_back(key);
  }
  return consumed;
}

void apply_preset(RunConfig& cfg, const std::string& name) {
  if (name == "mohanty-demo") {
    cfg.function_id = "square";
    cfg.g_function.clear();
    cfg.matrix = "cesaro";
    cfg.cesaro_alpha = 1.0;
    cfg.k = 2.0;
    cfg.weights = "classic";
    cfg.lambda = "invlog";
    cfg.x_choice = "auto";
    cfg.prefix = 2048;
    cfg.quadrature_samples = 16384;
    cfg.x0 = kPi / 2.0;
    cfg.half_width = 0.3;
    return;
  }
  throw config_error("unknown preset '" + name + "' (mohanty-demo)");
}

int run_check_class(const RunConfig& cfg) {
  const auto scenario = scenario_from_string(cfg.scenario);
  if (!scenario) {
    throw config_error("unknown scenario '" + cfg.scenario +
                       "' (lemma1, lemma2, lemma3, lemma4, thm1, thm2, thmA, thm6, "
                       "cor1, cor2)");
  }

  ConditionInputs in;
  in.matrix = make_matrix(cfg);
  in.alpha = make_weights(cfg);
  in.lambda = make_lambda(cfg);
  in.factor = make_factor(cfg, *in.matrix);
  in.theta = make_theta(cfg);
  in.k = cfg.k;
  in.qpd_power = cfg.epsilon;

  const ScenarioResult result =
      evaluate_scenario(*scenario, in, cfg.prefix, resolve_horizon(cfg), make_cond_tol(cfg));

  write_text_atomic(out_path(cfg, "scenario_" + std::string(to_string(result.id)) + ".json"),
                    scenario_json(result));
  for (const auto& cert : result.certificates) {
    write_text_atomic(out_path(cfg, "cert_" + std::string(to_string(cert.id)) + ".json"),
                      certificate_json(cert));
  }

  std::cout << "scenario " << to_string(result.id) << ": " << to_string(result.bundle_verdict)
            << "\n";
  for (const auto& cert : result.certificates) {
    std::cout << "  " << to_string(cert.id) << ": " << to_string(cert.verdict) << "  sup "
              << format_sig17(cert.sup_ratio) << "  slope " << format_sig17(cert.slope)
              << "\n";
  }
  if (!result.notes.empty()) std::cout << "notes: " << result.notes << "\n";
  return verdict_exit(result.bundle_verdict);
}

int run_summability(const RunConfig& cfg) {
  const TriangularMatrix m = make_matrix(cfg);
  const RealSequence weights = make_weights(cfg);
  const RealSequence lambda = make_lambda(cfg);
  const RealSequence factor = make_factor(cfg, m);
  const RealSequence terms = make_terms(cfg);

  const SeriesContext raw(terms);
  const SummabilityReport report = summability_total(
      m, weights, cfg.k, factored_terms(terms, lambda, factor), cfg.prefix,
      make_flat_tol(cfg));

  std::vector<DecompositionRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.prefix));
  const RealSequence partials = raw.partial_sums();
  for (std::int64_t n = 1; n < cfg.prefix; ++n) {
    rows.push_back(decomposition(m, lambda, factor, partials, n));
  }

  std::vector<double> alpha_vals(static_cast<std::size_t>(cfg.prefix));
  for (std::int64_t n = 0; n < cfg.prefix; ++n) {
    alpha_vals[static_cast<std::size_t>(n)] = weights(n);
  }

  write_text_atomic(out_path(cfg, "summability.csv"),
                    summability_csv(report, alpha_vals, rows));

  const std::vector<std::string> fields = {
      "\"type\": \"summability-report\"",
      "\"terms\": \"" + cfg.terms + "\"",
      "\"matrix\": \"" + m.name() + "\"",
      "\"weights\": \"" + cfg.weights + "\"",
      "\"k\": " + format_sig17(report.k),
      "\"prefix\": " + std::to_string(report.prefix),
      "\"total\": " + format_sig17(report.total),
      "\"last_half_gain\": " + format_sig17(report.last_half_gain),
      "\"increment_slope\": " + format_sig17(report.increment_slope),
      "\"transform_cross_error\": " + format_sig17(report.transform_cross_error),
      "\"max_abs_partial_sum\": " + format_sig17(report.max_abs_partial_sum),
      "\"verdict\": \"" + std::string(to_string(report.verdict)) + "\""};
  std::string json = "{\n";
  std::string line = "{";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    json += "  " + fields[i] + (i + 1 < fields.size() ? ",\n" : "\n");
    line += fields[i] + (i + 1 < fields.size() ? ", " : "");
  }
  json += "}\n";
  line += "}";
  write_text_atomic(out_path(cfg, "summability.json"), json);

  // The one-line summary on stdout mirrors summability.json for scripting.
  std::cout << line << "\n";
  return flat_exit(report.verdict);
}

int run_local_experiment(const RunConfig& cfg) {
  const TriangularMatrix m = make_matrix(cfg);
  const RealSequence weights = make_weights(cfg);
  const RealSequence lambda = make_lambda(cfg);
  const RealSequence factor = make_factor(cfg, m);

  const PeriodicFunction f = make_function(cfg.function_id);
  const PeriodicFunction g_base =
      cfg.g_function.empty() ? zero_function() : make_function(cfg.g_function);
  const PeriodicFunction g = localize(f, cfg.x0, cfg.half_width, g_base);

  const LocalPropertyResult result = local_property_experiment(
      f, g, cfg.x0, cfg.half_width, m, weights, lambda, factor, cfg.k, cfg.prefix,
      cfg.quadrature_samples, make_flat_tol(cfg), make_cond_tol(cfg));

  std::vector<double> alpha_vals(static_cast<std::size_t>(cfg.prefix));
  for (std::int64_t n = 0; n < cfg.prefix; ++n) {
    alpha_vals[static_cast<std::size_t>(n)] = weights(n);
  }
  write_text_atomic(out_path(cfg, "base.csv"), summability_csv(result.base, alpha_vals, {}));
  write_text_atomic(out_path(cfg, "modified.csv"),
                    summability_csv(result.modified, alpha_vals, {}));
  write_text_atomic(out_path(cfg, "difference.csv"),
                    summability_csv(result.difference, alpha_vals, {}));

  std::string json = "{\n";
  json += "  \"type\": \"local-experiment\",\n";
  json += "  \"x0\": " + format_sig17(cfg.x0) + ",\n";
  json += "  \"half_width\": " + format_sig17(cfg.half_width) + ",\n";
  json += "  \"agreement_offset\": " + format_sig17(result.agreement_offset) + ",\n";
  json += "  \"agreement_max_dev\": " + format_sig17(result.agreement_max_dev) + ",\n";
  json += "  \"headline\": \"" + std::string(to_string(result.headline())) + "\",\n";
  json += "  \"reports\": {\n";
  json += "    \"base\": " + report_block(result.base, "    ") + ",\n";
  json += "    \"modified\": " + report_block(result.modified, "    ") + ",\n";
  json += "    \"difference\": " + report_block(result.difference, "    ") + "\n";
  json += "  },\n";
  json += "  \"factor_certificates\": [\n";
  for (std::size_t i = 0; i < result.factor_certificates.size(); ++i) {
    json += certificate_json(result.factor_certificates[i]);
    if (json.back() == '\n') json.pop_back();
    json += i + 1 < result.factor_certificates.size() ? ",\n" : "\n";
  }
  json += "  ]\n}\n";
  write_text_atomic(out_path(cfg, "experiment.json"), json);

  std::cout << "local-experiment: " << to_string(result.headline()) << "\n";
  std::cout << "  base        total " << format_sig17(result.base.total) << "  "
            << to_string(result.base.verdict) << "\n";
  std::cout << "  modified    total " << format_sig17(result.modified.total) << "  "
            << to_string(result.modified.verdict) << "\n";
  std::cout << "  difference  total " << format_sig17(result.difference.total)
            << "  last-half gain " << format_sig17(result.difference.last_half_gain) << "  "
            << to_string(result.difference.verdict) << "\n";
  std::cout << "  agreement   offset " << format_sig17(result.agreement_offset)
            << "  max dev " << format_sig17(result.agreement_max_dev) << "\n";
  return flat_exit(result.headline());
}

int run_validate(const RunConfig& cfg) {
  if (cfg.validate_paths.empty()) throw config_error("validate needs at least one path");
  std::size_t total_issues = 0;
  for (const auto& path : cfg.validate_paths) {
    const std::vector<ValidationIssue> issues = validate_file(path);
    if (issues.empty()) {
      std::cout << path << ": ok\n";
      continue;
    }
    total_issues += issues.size();
    for (const auto& issue : issues) {
      std::cout << issue.path;
      if (issue.line > 0) std::cout << ":" << issue.line;
      std::cout << ": " << issue.message << "\n";
    }
  }
  return total_issues == 0 ? kExitSupported : kExitViolated;
}

}  // namespace summakit
