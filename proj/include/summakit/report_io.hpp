#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "summakit/conditions.hpp"
#include "summakit/summability.hpp"

namespace summakit {

// Shortest decimal form that round-trips a double (17 significant
// digits at most), with nan/inf spelled out. Shared by the CSV and
// JSON writers so identical runs produce byte-identical files.
std::string format_sig17(double x);

// Write-temp-then-rename so readers never observe a partial file.
// Creates parent directories. Throws config_error on I/O failure.
void write_text_atomic(const std::string& path, const std::string& content);

// JSON documents with stable key order.
std::string certificate_json(const ConditionCertificate& cert);
std::string scenario_json(const ScenarioResult& result);

// CSV rows n = 0..prefix-1 with header
// n,T_n,dT_n,alpha_n,increment,partial,Tn1,Tn2,Tn3,Tn4; the n = 0 row
// carries zeros in the difference columns.
std::string summability_csv(const SummabilityReport& report, const std::vector<double>& alpha,
                            const std::vector<DecompositionRow>& rows);

struct ValidationIssue {
  std::string path;
  std::int64_t line = 0;  // 1-based for CSV rows, 0 for whole-file issues
  std::string message;
};

// Re-parse a file this tool wrote (.csv or .json by extension) and
// check its structural invariants: header shape, numeric parse of
// every field, nondecreasing partials, decomposition row sums, and for
// JSON the presence and types of the certificate fields.
std::vector<ValidationIssue> validate_file(const std::string& path);

}  // namespace summakit
