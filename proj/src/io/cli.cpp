#include "grushin/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>

#include "grushin/bochner.hpp"
#include "grushin/calculus.hpp"
#include "grushin/errors.hpp"
#include "grushin/gfunc.hpp"
#include "grushin/gridfile.hpp"
#include "grushin/lp.hpp"
#include "grushin/parallel.hpp"
#include "grushin/report.hpp"
#include "grushin/verify/acceptance.hpp"

namespace grushin {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  return kExitData;
}

// ---- schema

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void require_object(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(path + "." + k, "unknown key");
}

bool is_pow2(long v) { return v >= 1 && (v & (v - 1)) == 0; }

long read_int(const json& j, const std::string& path, long lo, long hi) {
  if (!j.is_number_integer()) {
    if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>() && std::abs(j.get<double>()) < 1e15)
      return read_int(json(static_cast<long>(j.get<double>())), path, lo, hi);
    fail(path, "expected an integer");
  }
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<long>::max()))
    fail(path, "out of range");
  const long v = j.get<long>();
  if (v < lo || v > hi) fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double read_positive(const json& j, const std::string& path) {
  const double v = read_number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::uint64_t read_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  fail(path, "expected a non-negative integer");
}

void parse_grid(const json& j, RunConfig& c) {
  const std::string path = "$.grid";
  require_object(j, path, {"n", "Nx", "x_extent", "Nt", "t_extent"});
  GridSpec& g = c.grid;
  if (j.contains("n")) g.n = static_cast<int>(read_int(j["n"], path + ".n", 1, kMaxDim));
  if (j.contains("Nx")) g.Nx = static_cast<int>(read_int(j["Nx"], path + ".Nx", 8, 4096));
  if (j.contains("Nt")) g.Nt = static_cast<int>(read_int(j["Nt"], path + ".Nt", 8, 4096));
  if (j.contains("x_extent")) g.x_extent = read_positive(j["x_extent"], path + ".x_extent");
  if (j.contains("t_extent")) g.t_extent = read_positive(j["t_extent"], path + ".t_extent");
  if (!is_pow2(g.Nx)) fail(path + ".Nx", "must be a power of two");
  if (!is_pow2(g.Nt)) fail(path + ".Nt", "must be a power of two");
  try {
    g.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

void parse_function(const json& j, const std::string& path, TestFunctionSpec& f, const GridSpec& grid) {
  require_object(j, path, {"kind", "K_max", "m_max", "seed", "decay", "mode_degree", "mode_m"});
  if (j.contains("kind")) {
    try {
      f.kind = parse_test_function_kind(read_string(j["kind"], path + ".kind"));
    } catch (const ConfigError& e) {
      if (std::string_view(e.what()).starts_with("$")) throw;
      fail(path + ".kind", e.what());
    }
  }
  if (j.contains("K_max")) f.K_max = static_cast<int>(read_int(j["K_max"], path + ".K_max", 0, 64));
  if (j.contains("m_max")) f.m_max = static_cast<int>(read_int(j["m_max"], path + ".m_max", 1, grid.Nt / 2 - 1));
  if (j.contains("seed")) f.seed = read_seed(j["seed"], path + ".seed");
  if (j.contains("decay")) {
    f.decay = read_number(j["decay"], path + ".decay");
    if (f.decay < 0.0) fail(path + ".decay", "must be >= 0");
  }
  if (j.contains("mode_degree")) f.mode_degree = static_cast<int>(read_int(j["mode_degree"], path + ".mode_degree", 0, 64));
  if (j.contains("mode_m")) {
    const long lim = grid.Nt / 2 - 1;
    f.mode_m = static_cast<int>(read_int(j["mode_m"], path + ".mode_m", -lim, lim));
    if (f.mode_m == 0) fail(path + ".mode_m", "the lambda = 0 bin is excluded");
  }
  if (f.m_max > grid.Nt / 2 - 1) fail(path + ".m_max", "exceeds the time grid");
}

void parse_input(const json& j, RunConfig& c) {
  const std::string path = "$.input";
  require_object(j, path, {"source", "path", "function"});
  if (j.contains("source")) {
    c.input.source = read_string(j["source"], path + ".source");
    if (c.input.source != "test-function" && c.input.source != "file")
      fail(path + ".source", "expected \"test-function\" or \"file\"");
  }
  if (j.contains("path")) {
    const std::filesystem::path p(read_string(j["path"], path + ".path"));
    c.input.path = (p.is_absolute() ? p : std::filesystem::path(c.base_dir) / p).lexically_normal().string();
  }
  if (c.input.source == "file" && c.input.path.empty()) fail(path + ".path", "required when source is \"file\"");
  if (j.contains("function")) parse_function(j["function"], path + ".function", c.input.function, c.grid);
}

void parse_apply(const json& j, RunConfig& c) {
  const std::string path = "$.apply";
  require_object(j, path, {"kind", "k"});
  if (j.contains("kind")) {
    c.apply.kind = read_string(j["kind"], path + ".kind");
    if (c.apply.kind != "pipeline" && c.apply.kind != "gfunc") fail(path + ".kind", "expected \"pipeline\" or \"gfunc\"");
  }
  if (j.contains("k")) c.apply.k = static_cast<int>(read_int(j["k"], path + ".k", 1, 8));
}

void parse_probe(const json& j, RunConfig& c) {
  const std::string path = "$.probe";
  require_object(j, path, {"type", "p", "trials", "seed", "lambdas", "J", "decay", "refine", "n", "Nx", "delta",
                           "family_size", "symbol", "order", "mu_range", "samples"});
  auto& pr = c.probe;
  if (j.contains("type")) {
    pr.type = read_string(j["type"], path + ".type");
    static const std::set<std::string> types{"norm", "rbound", "maximal", "hormander", "equivalence"};
    if (!types.contains(pr.type)) fail(path + ".type", "expected norm, rbound, maximal, hormander or equivalence");
  }
  if (j.contains("p")) {
    pr.p = read_number(j["p"], path + ".p");
    if (!(pr.p > 1.0) || pr.p > 1e3) fail(path + ".p", "must lie in (1, 1000]");
  }
  if (j.contains("trials")) pr.trials = static_cast<std::size_t>(read_int(j["trials"], path + ".trials", 1, 1000000));
  if (j.contains("seed")) pr.seed = read_seed(j["seed"], path + ".seed");
  if (j.contains("lambdas")) {
    const json& a = j["lambdas"];
    if (!a.is_array() || a.empty()) fail(path + ".lambdas", "expected a non-empty array");
    pr.lambdas.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string ip = path + ".lambdas[" + std::to_string(i) + "]";
      const double v = read_number(a[i], ip);
      if (v == 0.0 || std::abs(v) > 1e6) fail(ip, "must be nonzero with |lambda| <= 1e6");
      pr.lambdas.push_back(v);
    }
  }
  if (j.contains("J")) pr.J = static_cast<std::size_t>(read_int(j["J"], path + ".J", 1, 256));
  if (j.contains("decay")) {
    const json& a = j["decay"];
    if (!a.is_array() || a.size() != 2) fail(path + ".decay", "expected [lo, hi]");
    pr.decay_lo = read_positive(a[0], path + ".decay[0]");
    pr.decay_hi = read_positive(a[1], path + ".decay[1]");
    if (pr.decay_hi < pr.decay_lo) fail(path + ".decay", "hi must be >= lo");
  }
  if (j.contains("refine")) pr.refine = read_bool(j["refine"], path + ".refine");
  if (j.contains("n")) pr.n = static_cast<int>(read_int(j["n"], path + ".n", 1, kMaxDim));
  if (j.contains("Nx")) {
    pr.Nx = static_cast<int>(read_int(j["Nx"], path + ".Nx", 0, 4096));
    if (pr.Nx != 0 && (pr.Nx < 8 || !is_pow2(pr.Nx))) fail(path + ".Nx", "must be 0 or a power of two >= 8");
  }
  if (j.contains("delta")) {
    pr.delta = read_number(j["delta"], path + ".delta");
    if (pr.delta < 0.0) fail(path + ".delta", "must be >= 0");
  }
  if (j.contains("family_size"))
    pr.family_size = static_cast<std::size_t>(read_int(j["family_size"], path + ".family_size", 1, 4096));
  if (j.contains("symbol")) {
    pr.symbol = read_string(j["symbol"], path + ".symbol");
    try {
      parse_symbol(pr.symbol);
    } catch (const Error& e) {
      fail(path + ".symbol", e.what());
    }
  }
  if (j.contains("order")) pr.order = static_cast<int>(read_int(j["order"], path + ".order", 1, 8));
  if (j.contains("mu_range")) {
    const json& a = j["mu_range"];
    if (!a.is_array() || a.size() != 2) fail(path + ".mu_range", "expected [lo, hi]");
    pr.mu_lo = read_positive(a[0], path + ".mu_range[0]");
    pr.mu_hi = read_positive(a[1], path + ".mu_range[1]");
    if (!(pr.mu_hi > pr.mu_lo)) fail(path + ".mu_range", "hi must exceed lo");
  }
  if (j.contains("samples")) pr.samples = static_cast<int>(read_int(j["samples"], path + ".samples", 2, 1000000));
}

void parse_selftest(const json& j, RunConfig& c) {
  const std::string path = "$.selftest";
  require_object(j, path, {"criteria"});
  if (!j.contains("criteria")) return;
  const json& a = j["criteria"];
  if (!a.is_array()) fail(path + ".criteria", "expected an array");
  c.criteria.clear();
  for (std::size_t i = 0; i < a.size(); ++i)
    c.criteria.push_back(
        static_cast<int>(read_int(a[i], path + ".criteria[" + std::to_string(i) + "]", 1, verify::kCriterionCount)));
}

void parse_output(const json& j, RunConfig& c) {
  const std::string path = "$.output";
  require_object(j, path, {"dir", "prefix"});
  if (j.contains("dir")) {
    c.output_dir = read_string(j["dir"], path + ".dir");
    if (c.output_dir.empty()) fail(path + ".dir", "must not be empty");
  }
  if (j.contains("prefix")) {
    c.prefix = read_string(j["prefix"], path + ".prefix");
    if (c.prefix.empty() || c.prefix.find('/') != std::string::npos) fail(path + ".prefix", "must be a plain file name");
  }
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  require_object(j, "$", {"grid", "K", "pipeline", "input", "apply", "probe", "selftest", "output"});
  // grid first: other ranges depend on it
  if (j.contains("grid")) parse_grid(j["grid"], c);
  if (j.contains("K")) c.K = static_cast<int>(read_int(j["K"], "$.K", 0, 64));
  if (j.contains("pipeline")) {
    c.pipeline = read_string(j["pipeline"], "$.pipeline");
    try {
      OperatorPipeline::parse(c.pipeline);
    } catch (const Error& e) {
      fail("$.pipeline", e.what());
    }
  }
  if (j.contains("input")) parse_input(j["input"], c);
  if (j.contains("apply")) parse_apply(j["apply"], c);
  if (j.contains("probe")) parse_probe(j["probe"], c);
  if (j.contains("selftest")) parse_selftest(j["selftest"], c);
  if (j.contains("output")) parse_output(j["output"], c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$: " + std::string(e.what()));
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(j, dir.empty() ? "." : dir.string());
}

// ---- commands

namespace {

std::string base_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.output_dir) / (c.prefix.empty() ? name : c.prefix)).string();
}

ReportGrid report_grid(const GridSpec& g) { return {g.n, g.Nx, g.x_extent, g.Nt, g.t_extent}; }

json input_json(const RunConfig& c) {
  if (c.input.source == "file") return {{"source", "file"}, {"path", std::filesystem::path(c.input.path).filename().string()}};
  const auto& f = c.input.function;
  return {{"source", "test-function"}, {"kind", to_string(f.kind)}, {"K_max", f.K_max}, {"m_max", f.m_max},
          {"seed", f.seed},             {"decay", f.decay},         {"mode_degree", f.mode_degree}, {"mode_m", f.mode_m}};
}

GridFunction load_input(const RunConfig& c) {
  if (c.input.source == "file") return load_grid_function(c.input.path);
  return make_test_function(c.input.function, c.grid);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Output {
  json report;
  std::vector<std::string> csv;
  std::optional<GridFunction> grid;
};

Output run_transform(const RunConfig& c, std::ostream& log) {
  const GridFunction f = load_input(c);
  const SpectralCoefficients coeffs = forward_transform(f, c.K);
  const GridFunction back = inverse_transform(coeffs);
  double err = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) err = std::max(err, std::abs(back.values()[i] - f.values()[i]));
  const double norm = lp_norm(f, 2.0);

  Output out;
  json slices = json::array();
  out.csv.emplace_back("m,lambda,index,degree,re,im");
  for (std::size_t s = 0; s < coeffs.slice_count(); ++s) {
    const HermiteSlice& sl = coeffs.slices()[s];
    slices.push_back({{"m", coeffs.frequency_index(s)}, {"lambda", sl.lambda()}, {"energy", sl.norm_squared()}});
    for (std::size_t i = 0; i < sl.size(); ++i)
      out.csv.push_back(std::to_string(coeffs.frequency_index(s)) + "," + fmt(sl.lambda()) + "," + std::to_string(i) + "," +
                        std::to_string(sl.layout().degree(i)) + "," + fmt(sl[i].real()) + "," + fmt(sl[i].imag()));
  }
  out.report = {{"kind", "transform"},
                {"version", kVersion},
                {"grid", to_json(report_grid(f.spec()))},
                {"K", c.K},
                {"input", input_json(c)},
                {"grid_energy", norm * norm},
                {"parseval_energy", coeffs.parseval_energy()},
                {"dropped_energy", coeffs.dropped_energy()},
                {"truncation_indicator", coeffs.truncation_indicator()},
                {"round_trip_max_error", err},
                {"slices", slices}};
  log << "transform: energy " << short_fmt(norm * norm) << ", parseval " << short_fmt(coeffs.parseval_energy())
      << ", round trip " << short_fmt(err) << "\n";
  return out;
}

Output run_apply_pipeline(const RunConfig& c, std::ostream& log) {
  const GridFunction f = load_input(c);
  const OperatorPipeline op = OperatorPipeline::parse(c.pipeline);
  GridFunction g = op.apply(f, c.K);
  double change = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) change = std::max(change, std::abs(g.values()[i] - f.values()[i]));
  const double in2 = lp_norm(f, 2.0), out2 = lp_norm(g, 2.0);
  Output out;
  out.report = {{"kind", "apply"},
                {"version", kVersion},
                {"operator", op.name()},
                {"grid", to_json(report_grid(f.spec()))},
                {"K", c.K},
                {"input", input_json(c)},
                {"input_l2", in2},
                {"output_l2", out2},
                {"max_abs_change", change}};
  log << "apply " << op.name() << ": ||f||_2 " << short_fmt(in2) << " -> " << short_fmt(out2) << "\n";
  out.grid = std::move(g);
  return out;
}

Output run_apply_gfunc(const RunConfig& c, std::ostream& log) {
  const GridFunction f = load_input(c);
  const SpectralCoefficients coeffs = forward_transform(f, c.K);
  const double expected = g_isometry_constant(c.apply.k);
  const GFunctionSpec spec{c.apply.k, {}};
  const int n = f.spec().n;

  std::vector<double> ratios(coeffs.slice_count(), -1.0);
  parallel_for(coeffs.slice_count(), [&](std::size_t s) {
    const HermiteSlice& sl = coeffs.slices()[s];
    const double norm = std::sqrt(sl.norm_squared());
    if (!(norm > kDegenerateNorm)) return;
    const TensorGrid gh = gauss_hermite_grid(n, 2 * c.K + 4, sl.lambda());
    const auto g = g_k_eval(spec, sl, gh);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += gh.weight(i) * g[i] * g[i];
    ratios[s] = std::sqrt(acc) / norm;
  });

  Output out;
  out.csv.emplace_back("m,lambda,ratio");
  json rows = json::array();
  double worst = 0.0;
  std::size_t skipped = 0;
  for (std::size_t s = 0; s < ratios.size(); ++s) {
    if (ratios[s] < 0.0) {
      ++skipped;
      continue;
    }
    const double lam = coeffs.slices()[s].lambda();
    worst = std::max(worst, std::abs(ratios[s] - expected) / expected);
    rows.push_back({{"m", coeffs.frequency_index(s)}, {"lambda", lam}, {"ratio", ratios[s]}});
    out.csv.push_back(std::to_string(coeffs.frequency_index(s)) + "," + fmt(lam) + "," + fmt(ratios[s]));
  }
  out.report = {{"kind", "gfunc"},
                {"version", kVersion},
                {"k", c.apply.k},
                {"grid", to_json(report_grid(f.spec()))},
                {"K", c.K},
                {"input", input_json(c)},
                {"expected_ratio", expected},
                {"max_relative_deviation", worst},
                {"skipped", skipped},
                {"slices", rows}};
  log << "gfunc k=" << c.apply.k << ": ||g_k f^lambda||/||f^lambda|| vs " << short_fmt(expected)
      << ", max relative deviation " << short_fmt(worst) << "\n";
  return out;
}

RBoundOptions rbound_options(const RunConfig& c) {
  RBoundOptions o;
  o.n = c.probe.n;
  o.K = c.K;
  o.trials = c.probe.trials;
  o.seed = c.probe.seed;
  o.decay_lo = c.probe.decay_lo;
  o.decay_hi = c.probe.decay_hi;
  o.Nx = c.probe.Nx;
  o.refine = c.probe.refine;
  return o;
}

std::vector<double> probe_lambdas(const RunConfig& c) {
  return c.probe.lambdas.empty() ? default_lambdas(c.probe.J, c.probe.seed) : c.probe.lambdas;
}

std::vector<HermiteSlice> slice_family(const RunConfig& c, double lambda) {
  const RBoundOptions o = rbound_options(c);
  std::vector<HermiteSlice> fam;
  for (std::size_t i = 0; i < c.probe.family_size; ++i) fam.push_back(random_slice_family({lambda}, o, i).front());
  return fam;
}

void log_norm(std::ostream& log, const NormReport& r) {
  log << r.kind << " " << r.op << " p=" << short_fmt(r.p) << ": max ratio " << short_fmt(r.max_ratio) << ", refinement [";
  for (std::size_t i = 0; i < r.refinement.size(); ++i) log << (i ? ", " : "") << short_fmt(r.refinement[i]);
  log << "], " << (r.stable ? "stable" : "not stable") << "\n";
}

Output run_probe(const RunConfig& c, std::ostream& log) {
  const auto& pr = c.probe;
  Output out;
  if (pr.type == "norm") {
    ProbeOptions o;
    o.grid = c.grid;
    o.functions = c.input.function;
    o.trials = pr.trials;
    o.seed = pr.seed;
    o.decay_lo = pr.decay_lo;
    o.decay_hi = pr.decay_hi;
    o.refine = pr.refine;
    const NormReport r = operator_norm_probe(OperatorPipeline::parse(c.pipeline), pr.p, o);
    log_norm(log, r);
    out.report = to_json(r);
    out.csv = ratio_rows(r);
  } else if (pr.type == "rbound") {
    const NormReport r = r_bound_probe(OperatorPipeline::parse(c.pipeline), probe_lambdas(c), pr.p, rbound_options(c));
    log_norm(log, r);
    out.report = to_json(r);
    out.csv = ratio_rows(r);
  } else if (pr.type == "maximal") {
    const double lambda = pr.lambdas.empty() ? 1.0 : pr.lambdas.front();
    const auto family = slice_family(c, lambda);
    const TensorGrid grid = rbound_grid(pr.n, c.K, {std::abs(lambda)}, pr.Nx);
    const DominationReport d = maximal_domination_check(family, pr.delta, grid);
    const NormReport fs = fefferman_stein_probe(probe_lambdas(c), pr.p, rbound_options(c));
    log << "maximal delta=" << short_fmt(d.delta) << ": C_emp " << short_fmt(d.c_emp) << " -> " << short_fmt(d.c_emp_refined)
        << ", " << (d.stable ? "stable" : "not stable") << "\n";
    log_norm(log, fs);
    out.report = {{"kind", "maximal"},
                  {"version", kVersion},
                  {"delta", d.delta},
                  {"lambda", d.lambda},
                  {"family_size", d.family_size},
                  {"seed", pr.seed},
                  {"K", c.K},
                  {"grid", to_json(ReportGrid{pr.n, static_cast<int>(grid.points_per_axis()),
                                              -grid.nodes.front(), 0, 0.0})},
                  {"r_set", d.r_set},
                  {"c_emp", d.c_emp},
                  {"c_emp_refined", d.c_emp_refined},
                  {"one_sided", d.one_sided},
                  {"relative_change", d.relative_change},
                  {"stable", d.stable},
                  {"above_critical", d.above_critical},
                  {"fefferman_stein", to_json(fs)}};
    out.csv = ratio_rows(fs);
  } else if (pr.type == "hormander") {
    const ScalarSymbol m = parse_symbol(pr.symbol);
    const HormanderReport h = hormander_check(m, pr.order, pr.mu_lo, pr.mu_hi, pr.samples);
    out.csv.emplace_back("k,sup,argmax");
    for (std::size_t k = 0; k < h.sup.size(); ++k) out.csv.push_back(std::to_string(k) + "," + fmt(h.sup[k]) + "," + fmt(h.argmax[k]));
    log << "hormander " << m.name << ": S_k =";
    for (double s : h.sup) log << " " << short_fmt(s);
    log << ", " << (h.bounded ? "bounded" : "unbounded") << "\n";
    out.report = {{"kind", "hormander"}, {"version", kVersion}, {"symbol", m.name}, {"order", h.order},
                  {"mu_lo", h.mu_lo},    {"mu_hi", h.mu_hi},    {"samples", h.samples}, {"sup", h.sup},
                  {"argmax", h.argmax},  {"bounded", h.bounded}};
  } else {
    const auto family = slice_family(c, 1.0);
    const std::vector<double> lambdas = pr.lambdas.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0} : pr.lambdas;
    const GEquivalenceReport e = g_norm_equivalence_report(family, pr.p, lambdas);
    out.csv.emplace_back("lambda,c1,c2");
    for (std::size_t i = 0; i < e.lambdas.size(); ++i)
      out.csv.push_back(fmt(e.lambdas[i]) + "," + fmt(e.c1[i]) + "," + fmt(e.c2[i]));
    log << "equivalence p=" << short_fmt(e.p) << ": spread " << short_fmt(e.spread) << ", "
        << (e.lambda_stable ? "stable" : "not stable") << "\n";
    out.report = {{"kind", "equivalence"}, {"version", kVersion},  {"p", e.p},           {"lambdas", e.lambdas},
                  {"c1", e.c1},            {"c2", e.c2},           {"spread", e.spread}, {"lambda_stable", e.lambda_stable},
                  {"excluded_zero", e.excluded_zero}, {"family_size", family.size()}, {"K", c.K}, {"seed", pr.seed}};
  }
  return out;
}

}  // namespace

int run_pipeline(const std::string& subcommand, const RunConfig& c, std::ostream& log) {
  Output out;
  json meta = {{"subcommand", subcommand}};
  int code = kExitOk;
  std::string name = subcommand;
  if (subcommand == "transform") {
    out = run_transform(c, log);
  } else if (subcommand == "apply") {
    out = c.apply.kind == "gfunc" ? run_apply_gfunc(c, log) : run_apply_pipeline(c, log);
  } else if (subcommand == "probe") {
    out = run_probe(c, log);
    name = "probe-" + c.probe.type;
  } else if (subcommand == "selftest") {
    const auto results = verify::run_suite(c.criteria);
    json rows = json::array(), timing = json::object();
    bool ok = true;
    for (const auto& r : results) {
      log << verify::format_line(r) << "\n" << std::flush;
      rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
      timing[std::to_string(r.id)] = r.seconds;
      ok = ok && r.passed;
    }
    out.report = {{"kind", "selftest"}, {"version", kVersion}, {"passed", ok}, {"criteria", rows}};
    meta["seconds"] = timing;
    code = ok ? kExitOk : kExitInvariant;
  } else {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }

  const std::string base = base_path(c, name);
  if (out.grid) save_grid_function(*out.grid, base + ".grid");
  write_report(out.report, base, out.csv, meta);
  log << "wrote " << base << ".json\n";
  return code;
}

}  // namespace grushin
