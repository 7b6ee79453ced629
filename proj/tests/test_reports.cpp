#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "summakit/conditions.hpp"
#include "summakit/errors.hpp"
#include "summakit/matrices.hpp"
#include "summakit/numerics.hpp"
#include "summakit/report_io.hpp"
#include "summakit/summability.hpp"

using namespace summakit;

namespace {

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() /
             ("summakit_reports_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& content) {
  const std::string path = (scratch_dir() / name).string();
  write_text_atomic(path, content);
  return path;
}

bool any_issue_contains(const std::vector<ValidationIssue>& issues, const char* needle) {
  for (const auto& issue : issues) {
    if (issue.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

// Replaces one comma-separated field in one line of a CSV body.
std::string patch_csv_field(const std::string& csv, std::size_t line_idx, std::size_t field_idx,
                            const std::string& value) {
  auto lines = split_lines(csv);
  std::vector<std::string> fields;
  std::stringstream ss(lines.at(line_idx));
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  fields.at(field_idx) = value;
  std::string rebuilt;
  for (std::size_t j = 0; j < fields.size(); ++j) {
    if (j) rebuilt += ',';
    rebuilt += fields[j];
  }
  lines.at(line_idx) = rebuilt;
  return join_lines(lines);
}

RealSequence linear() {
  return RealSequence("n", [](std::int64_t n) { return static_cast<double>(n); });
}

RealSequence ones() {
  return RealSequence("ones", [](std::int64_t) { return 1.0; });
}

RealSequence invlog() {
  return RealSequence("1/log(n+2)",
                      [](std::int64_t n) { return 1.0 / std::log(static_cast<double>(n) + 2.0); });
}

// Mirrors how the command-line layer assembles the summability CSV.
std::string sample_summability_csv(std::int64_t prefix) {
  const auto m = TriangularMatrix::cesaro(1.0);
  const RealSequence terms("u", [](std::int64_t n) {
    return (n % 2 == 0 ? 1.0 : -1.0) / (static_cast<double>(n) + 1.0);
  });
  const RealSequence lambda = invlog();
  const RealSequence factor = ones();
  const SeriesContext raw(terms);
  const SummabilityReport report =
      summability_total(m, linear(), 2.0, factored_terms(terms, lambda, factor), prefix);
  std::vector<DecompositionRow> rows;
  const RealSequence partials = raw.partial_sums();
  for (std::int64_t n = 1; n < prefix; ++n) {
    rows.push_back(decomposition(m, lambda, factor, partials, n));
  }
  std::vector<double> alpha_vals(static_cast<std::size_t>(prefix));
  for (std::int64_t n = 0; n < prefix; ++n) {
    alpha_vals[static_cast<std::size_t>(n)] = static_cast<double>(n);
  }
  return summability_csv(report, alpha_vals, rows);
}

}  // namespace

TEST_CASE("format_sig17 round-trips doubles exactly") {
  const double values[] = {0.1,       1.0 / 3.0,     kPi,   1e300, 5e-324, 123456.789,
                           -2.5e-17,  1.0,           0.0,   -1.0,  6.02e23,
                           0x1.fffffffffffffp1023, 0x1p-1022};
  for (double x : values) {
    const std::string s = format_sig17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  const std::string neg_zero = format_sig17(-0.0);
  CHECK(std::signbit(std::strtod(neg_zero.c_str(), nullptr)));
  CHECK(format_sig17(std::nan("")) == "nan");
  CHECK(format_sig17(HUGE_VAL) == "inf");
  CHECK(format_sig17(-HUGE_VAL) == "-inf");
  // Short decimals stay short: no 17-digit noise on round values.
  CHECK(format_sig17(0.5) == "0.5");
  CHECK(format_sig17(2.0) == "2");
}

TEST_CASE("write_text_atomic creates directories and replaces content") {
  const auto nested = scratch_dir() / "a" / "b" / "file.txt";
  write_text_atomic(nested.string(), "first");
  CHECK(read_file(nested.string()) == "first");
  write_text_atomic(nested.string(), "second");
  CHECK(read_file(nested.string()) == "second");

  // A path through an existing regular file cannot be created.
  const auto blocker = scratch_dir() / "blocker";
  write_text_atomic(blocker.string(), "x");
  CHECK_THROWS_AS(write_text_atomic((blocker / "under.txt").string(), "y"), config_error);
}

TEST_CASE("condition certificates validate after a round trip") {
  ConditionInputs in;
  in.matrix = TriangularMatrix::cesaro(1.0);
  in.alpha = linear();
  in.phi = default_phi(*in.matrix);
  const auto cert = evaluate_condition(ConditionId::t3, in, 64, 256);
  const std::string path = write_scratch("cert_ok.json", certificate_json(cert));
  CHECK(validate_file(path).empty());

  ConditionInputs exact_in;
  exact_in.matrix = TriangularMatrix::custom(
      "growing", [](std::int64_t n, std::int64_t) { return static_cast<double>(n + 1); });
  const auto exact = evaluate_condition(ConditionId::ta_i, exact_in, 16, 16);
  const std::string path2 = write_scratch("cert_exact.json", certificate_json(exact));
  CHECK(validate_file(path2).empty());
}

TEST_CASE("tampered certificates are flagged") {
  ConditionInputs in;
  in.matrix = TriangularMatrix::cesaro(1.0);
  in.alpha = linear();
  in.phi = default_phi(*in.matrix);
  const std::string body = certificate_json(evaluate_condition(ConditionId::t3, in, 64, 256));

  std::string no_prefix = body;
  no_prefix.replace(no_prefix.find("\"N\":"), 4, "\"NN\":");
  CHECK(any_issue_contains(validate_file(write_scratch("cert_no_n.json", no_prefix)),
                           "missing or invalid field 'N'"));

  std::string bad_verdict = body;
  bad_verdict.replace(bad_verdict.find("\"verdict\": \"supported\""), 22,
                      "\"verdict\": \"perhaps00\"");
  CHECK(any_issue_contains(validate_file(write_scratch("cert_bad_verdict.json", bad_verdict)),
                           "unknown verdict 'perhaps00'"));

  std::string bad_id = body;
  bad_id.replace(bad_id.find("\"id\": \"T3\""), 10, "\"id\": \"T9\"");
  CHECK(any_issue_contains(validate_file(write_scratch("cert_bad_id.json", bad_id)),
                           "unknown condition id 'T9'"));

  CHECK(any_issue_contains(validate_file(write_scratch("cert_parse.json", "{{{")),
                           "JSON parse error"));
  CHECK(any_issue_contains(validate_file(write_scratch("cert_untyped.json", "{\"a\": 1}")),
                           "no string 'type' field"));
  CHECK(any_issue_contains(
      validate_file(write_scratch("cert_wrong_type.json", "{\"type\": \"mystery\"}")),
      "unknown document type 'mystery'"));
}

TEST_CASE("scenario reports validate after a round trip") {
  ConditionInputs in;
  in.matrix = TriangularMatrix::riesz(ones());
  in.alpha = linear();
  in.k = 2.0;
  const auto result = evaluate_scenario(ScenarioId::lemma4, in, 64, 256);
  const std::string body = scenario_json(result);
  const std::string path = write_scratch("scenario_ok.json", body);
  CHECK(validate_file(path).empty());

  std::string bad_id = body;
  bad_id.replace(bad_id.find("\"scenario\": \"lemma4\""), 20, "\"scenario\": \"lemma9\"");
  CHECK(any_issue_contains(validate_file(write_scratch("scenario_bad.json", bad_id)),
                           "unknown scenario id 'lemma9'"));

  const char* empty_certs =
      "{\"type\": \"scenario-report\", \"scenario\": \"lemma4\", \"params\": \"p\","
      " \"notes\": \"\", \"verdict\": \"supported\", \"certificates\": []}";
  CHECK(any_issue_contains(validate_file(write_scratch("scenario_empty.json", empty_certs)),
                           "carries no certificates"));
}

TEST_CASE("summability report documents validate field by field") {
  const char* good =
      "{\"type\": \"summability-report\", \"terms\": \"alternating\", \"matrix\": \"cesaro\","
      " \"weights\": \"classic\", \"k\": 2, \"prefix\": 64, \"total\": 1.05,"
      " \"last_half_gain\": 0.1, \"increment_slope\": -1.0,"
      " \"transform_cross_error\": 1e-15, \"max_abs_partial_sum\": 1,"
      " \"verdict\": \"inconclusive\"}";
  CHECK(validate_file(write_scratch("sum_ok.json", good)).empty());

  std::string small = good;
  small.replace(small.find("\"prefix\": 64"), 12, "\"prefix\": 2");
  CHECK(any_issue_contains(validate_file(write_scratch("sum_small.json", small)),
                           "invalid field 'prefix'"));

  std::string bad_flat = good;
  bad_flat.replace(bad_flat.find("\"inconclusive\""), 14, "\"flatish00000\"");
  CHECK(any_issue_contains(validate_file(write_scratch("sum_flat.json", bad_flat)),
                           "unknown flatness verdict 'flatish00000'"));
}

TEST_CASE("local experiment documents validate their blocks") {
  const std::string cert =
      "{\"id\": \"BV\", \"params\": \"x\", \"N\": 8, \"M\": 8, \"samples\": [[8, 0.0]],"
      " \"sup_ratio\": 0.0, \"slope\": 0.0, \"verdict\": \"supported\", \"notes\": \"\"}";
  const std::string block =
      "{\"total\": 0.5, \"last_half_gain\": 0.0, \"increment_slope\": -1.2,"
      " \"verdict\": \"flat\"}";
  const std::string good = "{\"type\": \"local-experiment\", \"x0\": 1.0, \"half_width\": 0.3,"
                           " \"agreement_offset\": 0.0, \"agreement_max_dev\": 0.0,"
                           " \"headline\": \"flat\", \"reports\": {\"base\": " +
                           block + ", \"modified\": " + block + ", \"difference\": " + block +
                           "}, \"factor_certificates\": [" + cert + "]}";
  CHECK(validate_file(write_scratch("exp_ok.json", good)).empty());

  std::string missing = good;
  missing.replace(missing.find("\"modified\""), 10, "\"modified0\"");
  CHECK(any_issue_contains(validate_file(write_scratch("exp_missing.json", missing)),
                           "missing report block"));
}

TEST_CASE("summability CSV validates after a round trip") {
  const std::string csv = sample_summability_csv(32);
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 33);
  CHECK(lines[0] == "n,T_n,dT_n,alpha_n,increment,partial,Tn1,Tn2,Tn3,Tn4");
  CHECK(lines[1].substr(0, 2) == "0,");
  CHECK(validate_file(write_scratch("sum_ok.csv", csv)).empty());
}

TEST_CASE("tampered CSV bodies are flagged with their line numbers") {
  const std::string csv = sample_summability_csv(32);

  {
    auto lines = split_lines(csv);
    lines[0] = "n,T_n";
    const auto issues = validate_file(write_scratch("bad_header.csv", join_lines(lines)));
    REQUIRE(!issues.empty());
    CHECK(any_issue_contains(issues, "unexpected header"));
    CHECK(issues[0].line == 1);
  }
  {
    const auto issues = validate_file(write_scratch("empty.csv", ""));
    CHECK(any_issue_contains(issues, "empty file"));
  }
  {
    auto lines = split_lines(csv);
    lines.resize(1);
    CHECK(any_issue_contains(validate_file(write_scratch("no_rows.csv", join_lines(lines))),
                             "no data rows"));
  }
  {
    auto lines = split_lines(csv);
    lines[3] += ",0";
    CHECK(any_issue_contains(validate_file(write_scratch("wide.csv", join_lines(lines))),
                             "expected 10 fields"));
  }
  {
    CHECK(any_issue_contains(
        validate_file(write_scratch("nonnum.csv", patch_csv_field(csv, 4, 2, "abc"))),
        "field 3"));
  }
  {
    CHECK(any_issue_contains(
        validate_file(write_scratch("resequenced.csv", patch_csv_field(csv, 5, 0, "17"))),
        "row index"));
  }
  {
    CHECK(any_issue_contains(
        validate_file(write_scratch("row0.csv", patch_csv_field(csv, 1, 2, "0.25"))),
        "first row must carry zero differences"));
  }
  {
    const auto issues =
        validate_file(write_scratch("baddt.csv", patch_csv_field(csv, 6, 2, "0.75")));
    CHECK(any_issue_contains(issues, "dT_n does not match the T_n column"));
    bool line_seen = false;
    for (const auto& issue : issues) {
      if (issue.line == 7) line_seen = true;
    }
    CHECK(line_seen);
  }
  {
    CHECK(any_issue_contains(
        validate_file(write_scratch("sink.csv", patch_csv_field(csv, 8, 5, "-1e9"))),
        "partial column decreases"));
  }
  {
    CHECK(any_issue_contains(
        validate_file(write_scratch("badinc.csv", patch_csv_field(csv, 7, 4, "42.0"))),
        "increment does not match the partial column"));
  }
  {
    CHECK(any_issue_contains(
        validate_file(write_scratch("badparts.csv", patch_csv_field(csv, 9, 6, "3.25"))),
        "decomposition columns do not sum to dT_n"));
  }
}

TEST_CASE("unknown extensions and missing files are reported") {
  const std::string txt = write_scratch("notes.txt", "hello");
  CHECK(any_issue_contains(validate_file(txt), "unrecognized extension"));
  CHECK(any_issue_contains(validate_file((scratch_dir() / "absent.json").string()),
                           "cannot open file"));
}

TEST_CASE("certificate json carries stable keys in order") {
  ConditionInputs in;
  in.matrix = TriangularMatrix::cesaro(1.0);
  in.phi = default_phi(*in.matrix);
  const auto cert = evaluate_condition(ConditionId::t1, in, 16, 16);
  const std::string body = certificate_json(cert);
  const char* keys[] = {"\"type\"", "\"id\"",        "\"params\"", "\"N\"",       "\"M\"",
                        "\"samples\"", "\"sup_ratio\"", "\"slope\"",  "\"verdict\"", "\"notes\""};
  std::size_t pos = 0;
  for (const char* key : keys) {
    const std::size_t at = body.find(key, pos);
    REQUIRE(at != std::string::npos);
    pos = at;
  }
  CHECK(body.find("\"type\": \"condition-certificate\"") != std::string::npos);
  CHECK(body.find("\"id\": \"T1\"") != std::string::npos);
}
