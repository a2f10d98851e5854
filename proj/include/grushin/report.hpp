#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "grushin/norm_lab.hpp"

namespace grushin {

inline constexpr std::string_view kVersion = "1.0.0";

// Writes to path.tmp and renames over path. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const ReportGrid& g);

// Checks fields and their redundancies (ratio count, stability rule, max).
// Throws FormatError naming the first problem.
void validate_norm_report(const nlohmann::json& j);

// Report of any kind: "kind" and "version" are required; kinds with a known
// layout (norm, rbound, fefferman-stein) get the full check.
void validate_report(const nlohmann::json& j);

// <base>.json (pretty, deterministic), <base>.csv when rows are given, and
// <base>.meta.json with the timestamp and run environment.
void write_report(const nlohmann::json& report, const std::string& base, const std::vector<std::string>& csv_rows = {},
                  const nlohmann::json& meta_extra = nlohmann::json::object());

// Per-trial CSV rows: "trial,ratio".
std::vector<std::string> ratio_rows(const NormReport& r);

}  // namespace grushin
