#include "grushin/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

using nlohmann::json;

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + tmp + "'");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

json to_json(const ReportGrid& g) {
  return {{"n", g.n}, {"Nx", g.Nx}, {"x_extent", g.x_extent}, {"Nt", g.Nt}, {"t_extent", g.t_extent}};
}

json to_json(const NormReport& r) {
  return {{"kind", r.kind},
          {"operator", r.op},
          {"p", r.p},
          {"trials", r.trials},
          {"skipped", r.skipped},
          {"seed", r.seed},
          {"ratios", r.ratios},
          {"max_ratio", r.max_ratio},
          {"refinement", r.refinement},
          {"lambdas", r.lambdas},
          {"stable", r.stable},
          {"grid", to_json(r.grid)},
          {"K", r.K},
          {"note", r.note},
          {"version", kVersion}};
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw FormatError("report: " + what); }

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

double finite_number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) bad(std::string("'") + key + "' is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(std::string("'") + key + "' is not finite");
  return d;
}

std::uint64_t count(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad(std::string("'") + key + "' is not a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> number_array(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) bad(std::string("'") + key + "' is not an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) bad(std::string("'") + key + "' holds a non-finite entry");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

void validate_norm_report(const json& j) {
  if (!j.is_object()) bad("not an object");
  if (!field(j, "operator").is_string()) bad("'operator' is not a string");
  const double p = finite_number(j, "p");
  if (!(p > 1.0)) bad("'p' must exceed 1");
  const auto trials = count(j, "trials");
  const auto skipped = count(j, "skipped");
  count(j, "seed");
  if (skipped > trials) bad("more skipped trials than trials");
  const auto ratios = number_array(j, "ratios");
  if (ratios.size() != trials - skipped) bad("ratios[] length differs from trials - skipped");
  for (double r : ratios)
    if (r < 0.0) bad("negative ratio");
  const double mx = finite_number(j, "max_ratio");
  double expect = 0.0;
  for (double r : ratios) expect = std::max(expect, r);
  if (mx != expect) bad("max_ratio differs from max(ratios)");
  const auto refinement = number_array(j, "refinement");
  if (!refinement.empty() && refinement.front() != mx) bad("refinement[0] differs from max_ratio");
  number_array(j, "lambdas");
  const json& st = field(j, "stable");
  if (!st.is_boolean()) bad("'stable' is not a boolean");
  if (st.get<bool>() != refinement_stable(refinement)) bad("'stable' disagrees with the refinement rule");
  const json& g = field(j, "grid");
  if (!g.is_object()) bad("'grid' is not an object");
  const auto n = count(g, "n");
  if (n < 1 || n > static_cast<std::uint64_t>(kMaxDim)) bad("grid.n out of range");
  count(g, "Nx");
  count(g, "Nt");
  finite_number(g, "x_extent");
  finite_number(g, "t_extent");
  count(j, "K");
  if (!field(j, "version").is_string()) bad("'version' is not a string");
}

void validate_report(const json& j) {
  if (!j.is_object()) bad("not an object");
  const json& kind = field(j, "kind");
  if (!kind.is_string()) bad("'kind' is not a string");
  if (!field(j, "version").is_string()) bad("'version' is not a string");
  const std::string k = kind.get<std::string>();
  if (k == "norm" || k == "rbound" || k == "fefferman-stein") validate_norm_report(j);
  if (k == "maximal") validate_norm_report(field(j, "fefferman_stein"));
}

std::vector<std::string> ratio_rows(const NormReport& r) {
  std::vector<std::string> rows;
  rows.reserve(r.ratios.size() + 1);
  rows.emplace_back("trial,ratio");
  char buf[64];
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g", i, r.ratios[i]);
    rows.emplace_back(buf);
  }
  return rows;
}

void write_report(const json& report, const std::string& base, const std::vector<std::string>& csv_rows,
                  const json& meta_extra) {
  validate_report(report);
  const std::string body = report.dump(2) + "\n";
  std::string csv;
  for (const auto& row : csv_rows) csv += row + "\n";

  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&tt, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  json meta = meta_extra;
  meta["timestamp"] = stamp;
  meta["threads"] = worker_count();
  meta["version"] = kVersion;
  meta["report"] = std::filesystem::path(base + ".json").filename().string();

  write_file_atomic(base + ".json", body);
  if (!csv_rows.empty()) write_file_atomic(base + ".csv", csv);
  write_file_atomic(base + ".meta.json", meta.dump(2) + "\n");
}

}  // namespace grushin
