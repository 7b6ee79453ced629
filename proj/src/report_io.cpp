#include "summakit/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "summakit/errors.hpp"

namespace summakit {

std::string format_sig17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (!target.parent_path().empty()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw config_error("cannot create directory for " + path + ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw config_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw config_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

namespace {

std::string esc(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

// Non-finite values are quoted so the output stays valid JSON.
std::string num(double x) {
  if (std::isfinite(x)) return format_sig17(x);
  return esc(format_sig17(x));
}

void append_certificate(std::string& out, const ConditionCertificate& cert,
                        const std::string& pad) {
  out += pad + "{\n";
  out += pad + "  \"type\": \"condition-certificate\",\n";
  out += pad + "  \"id\": " + esc(to_string(cert.id)) + ",\n";
  out += pad + "  \"params\": " + esc(cert.params) + ",\n";
  out += pad + "  \"N\": " + std::to_string(cert.prefix) + ",\n";
  out += pad + "  \"M\": " + std::to_string(cert.horizon) + ",\n";
  out += pad + "  \"samples\": [";
  for (std::size_t i = 0; i < cert.samples.size(); ++i) {
    if (i) out += ",";
    out += "[" + std::to_string(cert.samples[i].first) + "," +
           num(cert.samples[i].second) + "]";
  }
  out += "],\n";
  out += pad + "  \"sup_ratio\": " + num(cert.sup_ratio) + ",\n";
  out += pad + "  \"slope\": " + num(cert.slope) + ",\n";
  out += pad + "  \"verdict\": " + esc(to_string(cert.verdict)) + ",\n";
  out += pad + "  \"notes\": " + esc(cert.notes) + "\n";
  out += pad + "}";
}

}  // namespace

std::string certificate_json(const ConditionCertificate& cert) {
  std::string out;
  append_certificate(out, cert, "");
  out += "\n";
  return out;
}

std::string scenario_json(const ScenarioResult& result) {
  std::string out = "{\n";
  out += "  \"type\": \"scenario-report\",\n";
  out += "  \"scenario\": " + esc(to_string(result.id)) + ",\n";
  out += "  \"params\": " + esc(result.params) + ",\n";
  out += "  \"verdict\": " + esc(to_string(result.bundle_verdict)) + ",\n";
  out += "  \"notes\": " + esc(result.notes) + ",\n";
  out += "  \"certificates\": [\n";
  for (std::size_t i = 0; i < result.certificates.size(); ++i) {
    append_certificate(out, result.certificates[i], "    ");
    out += i + 1 < result.certificates.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string summability_csv(const SummabilityReport& report, const std::vector<double>& alpha,
                            const std::vector<DecompositionRow>& rows) {
  std::string out = "n,T_n,dT_n,alpha_n,increment,partial,Tn1,Tn2,Tn3,Tn4\n";
  std::size_t ri = 0;
  for (std::int64_t n = 0; n < report.prefix; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double t = report.transform[i];
    const double dt = n == 0 ? 0.0 : t - report.transform[i - 1];
    const double a = i < alpha.size() ? alpha[i] : 0.0;
    double parts[4] = {0.0, 0.0, 0.0, 0.0};
    if (ri < rows.size() && rows[ri].n == n) {
      for (int p = 0; p < 4; ++p) parts[p] = rows[ri].parts[static_cast<std::size_t>(p)];
      ++ri;
    }
    out += std::to_string(n);
    out += ',';
    out += format_sig17(t);
    out += ',';
    out += format_sig17(dt);
    out += ',';
    out += format_sig17(a);
    out += ',';
    out += format_sig17(report.increments[i]);
    out += ',';
    out += format_sig17(report.partials[i]);
    for (double p : parts) {
      out += ',';
      out += format_sig17(p);
    }
    out += '\n';
  }
  return out;
}

namespace {

bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  char* end = nullptr;
  out = std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

void validate_csv(const std::string& path, std::ifstream& in,
                  std::vector<ValidationIssue>& issues) {
  static const std::string kHeader = "n,T_n,dT_n,alpha_n,increment,partial,Tn1,Tn2,Tn3,Tn4";
  std::string line;
  if (!std::getline(in, line)) {
    issues.push_back({path, 0, "empty file"});
    return;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    issues.push_back({path, 1, "unexpected header: " + line});
    return;
  }
  std::int64_t expect_n = 0;
  std::int64_t lineno = 1;
  double prev_t = 0.0;
  double prev_partial = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 10) {
      issues.push_back({path, lineno, "expected 10 fields, got " +
                                          std::to_string(fields.size())});
      continue;
    }
    double v[10];
    bool ok = true;
    for (std::size_t i = 0; i < 10; ++i) {
      if (!parse_double(fields[i], v[i])) {
        issues.push_back({path, lineno, "field " + std::to_string(i + 1) +
                                            " is not a number: " + fields[i]});
        ok = false;
      }
    }
    if (!ok) continue;
    const auto n = static_cast<std::int64_t>(v[0]);
    if (n != expect_n) {
      issues.push_back({path, lineno, "row index " + std::to_string(n) +
                                          " out of order (expected " +
                                          std::to_string(expect_n) + ")"});
    }
    const double t = v[1], dt = v[2], inc = v[4], partial = v[5];
    const double parts_sum = v[6] + v[7] + v[8] + v[9];
    if (n == 0) {
      if (dt != 0.0 || inc != 0.0 || partial != 0.0) {
        issues.push_back({path, lineno, "first row must carry zero differences"});
      }
    } else {
      if (std::abs((t - prev_t) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
        issues.push_back({path, lineno, "dT_n does not match the T_n column"});
      }
      if (partial + 1e-9 * std::max(1.0, std::abs(partial)) < prev_partial) {
        issues.push_back({path, lineno, "partial column decreases"});
      }
      if (std::abs((partial - prev_partial) - inc) >
          1e-9 * std::max(1.0, std::abs(partial))) {
        issues.push_back({path, lineno, "increment does not match the partial column"});
      }
      const bool has_parts = v[6] != 0.0 || v[7] != 0.0 || v[8] != 0.0 || v[9] != 0.0;
      if (has_parts && std::abs(parts_sum - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
        issues.push_back({path, lineno, "decomposition columns do not sum to dT_n"});
      }
    }
    prev_t = t;
    prev_partial = partial;
    ++expect_n;
  }
  if (expect_n == 0) issues.push_back({path, 0, "no data rows"});
}

using nlohmann::json;

bool is_number_field(const json& j) {
  if (j.is_number()) return true;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    return s == "nan" || s == "inf" || s == "-inf";
  }
  return false;
}

bool check_string(const json& j, const char* key, std::vector<ValidationIssue>& issues,
                  const std::string& path, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) {
    issues.push_back({path, 0, where + ": missing or non-string field '" + key + "'"});
    return false;
  }
  return true;
}

bool check_number(const json& j, const char* key, std::vector<ValidationIssue>& issues,
                  const std::string& path, const std::string& where) {
  if (!j.contains(key) || !is_number_field(j[key])) {
    issues.push_back({path, 0, where + ": missing or non-numeric field '" + key + "'"});
    return false;
  }
  return true;
}

void validate_verdict(const json& j, const char* key, std::vector<ValidationIssue>& issues,
                      const std::string& path, const std::string& where) {
  if (!check_string(j, key, issues, path, where)) return;
  const std::string v = j[key].get<std::string>();
  if (v != "supported" && v != "violated" && v != "inconclusive") {
    issues.push_back({path, 0, where + ": unknown verdict '" + v + "'"});
  }
}

void validate_flatness(const json& j, const char* key, std::vector<ValidationIssue>& issues,
                       const std::string& path, const std::string& where) {
  if (!check_string(j, key, issues, path, where)) return;
  const std::string v = j[key].get<std::string>();
  if (v != "flat" && v != "growing" && v != "inconclusive") {
    issues.push_back({path, 0, where + ": unknown flatness verdict '" + v + "'"});
  }
}

void validate_certificate(const json& j, std::vector<ValidationIssue>& issues,
                          const std::string& path, const std::string& where) {
  if (!j.is_object()) {
    issues.push_back({path, 0, where + ": certificate is not an object"});
    return;
  }
  if (check_string(j, "id", issues, path, where)) {
    if (!condition_from_string(j["id"].get<std::string>())) {
      issues.push_back({path, 0, where + ": unknown condition id '" +
                                     j["id"].get<std::string>() + "'"});
    }
  }
  check_string(j, "params", issues, path, where);
  check_string(j, "notes", issues, path, where);
  for (const char* key : {"N", "M"}) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() < 0) {
      issues.push_back({path, 0, where + ": missing or invalid field '" + key + "'"});
    }
  }
  check_number(j, "sup_ratio", issues, path, where);
  check_number(j, "slope", issues, path, where);
  validate_verdict(j, "verdict", issues, path, where);
  if (!j.contains("samples") || !j["samples"].is_array()) {
    issues.push_back({path, 0, where + ": missing samples array"});
  } else {
    for (const auto& s : j["samples"]) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
          !is_number_field(s[1])) {
        issues.push_back({path, 0, where + ": malformed sample entry"});
        break;
      }
    }
  }
}

void validate_report_block(const json& j, const char* key,
                           std::vector<ValidationIssue>& issues, const std::string& path) {
  const std::string where = std::string("reports.") + key;
  if (!j.contains(key) || !j[key].is_object()) {
    issues.push_back({path, 0, where + ": missing report block"});
    return;
  }
  const json& r = j[key];
  check_number(r, "total", issues, path, where);
  check_number(r, "last_half_gain", issues, path, where);
  check_number(r, "increment_slope", issues, path, where);
  validate_flatness(r, "verdict", issues, path, where);
}

void validate_json(const std::string& path, std::ifstream& in,
                   std::vector<ValidationIssue>& issues) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    issues.push_back({path, 0, std::string("JSON parse error: ") + e.what()});
    return;
  }
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
    issues.push_back({path, 0, "document has no string 'type' field"});
    return;
  }
  const std::string type = doc["type"].get<std::string>();
  if (type == "condition-certificate") {
    validate_certificate(doc, issues, path, "certificate");
  } else if (type == "scenario-report") {
    if (check_string(doc, "scenario", issues, path, "scenario")) {
      if (!scenario_from_string(doc["scenario"].get<std::string>())) {
        issues.push_back({path, 0, "unknown scenario id '" +
                                       doc["scenario"].get<std::string>() + "'"});
      }
    }
    check_string(doc, "params", issues, path, "scenario");
    check_string(doc, "notes", issues, path, "scenario");
    validate_verdict(doc, "verdict", issues, path, "scenario");
    if (!doc.contains("certificates") || !doc["certificates"].is_array() ||
        doc["certificates"].empty()) {
      issues.push_back({path, 0, "scenario report carries no certificates"});
    } else {
      std::size_t idx = 0;
      for (const auto& c : doc["certificates"]) {
        validate_certificate(c, issues, path, "certificates[" + std::to_string(idx) + "]");
        ++idx;
      }
    }
  } else if (type == "summability-report") {
    check_string(doc, "terms", issues, path, "report");
    check_string(doc, "matrix", issues, path, "report");
    check_string(doc, "weights", issues, path, "report");
    check_number(doc, "k", issues, path, "report");
    if (!doc.contains("prefix") || !doc["prefix"].is_number_integer() ||
        doc["prefix"].get<std::int64_t>() < 4) {
      issues.push_back({path, 0, "report: missing or invalid field 'prefix'"});
    }
    check_number(doc, "total", issues, path, "report");
    check_number(doc, "last_half_gain", issues, path, "report");
    check_number(doc, "increment_slope", issues, path, "report");
    check_number(doc, "transform_cross_error", issues, path, "report");
    check_number(doc, "max_abs_partial_sum", issues, path, "report");
    validate_flatness(doc, "verdict", issues, path, "report");
  } else if (type == "local-experiment") {
    check_number(doc, "x0", issues, path, "experiment");
    check_number(doc, "half_width", issues, path, "experiment");
    check_number(doc, "agreement_offset", issues, path, "experiment");
    check_number(doc, "agreement_max_dev", issues, path, "experiment");
    validate_flatness(doc, "headline", issues, path, "experiment");
    if (!doc.contains("reports") || !doc["reports"].is_object()) {
      issues.push_back({path, 0, "experiment: missing reports block"});
    } else {
      validate_report_block(doc["reports"], "base", issues, path);
      validate_report_block(doc["reports"], "modified", issues, path);
      validate_report_block(doc["reports"], "difference", issues, path);
    }
    if (!doc.contains("factor_certificates") || !doc["factor_certificates"].is_array()) {
      issues.push_back({path, 0, "experiment: missing factor_certificates array"});
    } else {
      std::size_t idx = 0;
      for (const auto& c : doc["factor_certificates"]) {
        validate_certificate(c, issues, path,
                             "factor_certificates[" + std::to_string(idx) + "]");
        ++idx;
      }
    }
  } else {
    issues.push_back({path, 0, "unknown document type '" + type + "'"});
  }
}

}  // namespace

std::vector<ValidationIssue> validate_file(const std::string& path) {
  std::vector<ValidationIssue> issues;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    issues.push_back({path, 0, "cannot open file"});
    return issues;
  }
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    validate_csv(path, in, issues);
  } else if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    validate_json(path, in, issues);
  } else {
    issues.push_back({path, 0, "unrecognized extension (expected .csv or .json)"});
  }
  return issues;
}

}  // namespace summakit
