#include "grushin/norm_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "grushin/bochner.hpp"
#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"
#include "grushin/riesz.hpp"

namespace grushin {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ull * (trial + 1)));
}

std::string_view to_string(TestFunctionKind k) {
  switch (k) {
    case TestFunctionKind::hermite_random: return "hermite-random";
    case TestFunctionKind::bump: return "bump";
    case TestFunctionKind::mode: return "mode";
  }
  return "?";
}

TestFunctionKind parse_test_function_kind(std::string_view s) {
  if (s == "hermite-random") return TestFunctionKind::hermite_random;
  if (s == "bump") return TestFunctionKind::bump;
  if (s == "mode") return TestFunctionKind::mode;
  throw ConfigError("unknown test function kind '" + std::string(s) + "'");
}

namespace {

double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 53>(rng); }

double gaussian(std::mt19937_64& rng) {
  // Box-Muller keeps the stream layout fixed across standard libraries.
  const double u = 1.0 - uniform01(rng), v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

// Seeded Fisher-Yates ranks 0..count-1.
std::vector<int> random_ranks(std::size_t count, std::mt19937_64& rng) {
  std::vector<int> r(count);
  std::iota(r.begin(), r.end(), 0);
  for (std::size_t i = count; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(r[i - 1], r[std::min(j, i - 1)]);
  }
  return r;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
}

void check_band(const TestFunctionSpec& spec, const GridSpec& grid) {
  grid.validate();
  if (spec.K_max < 0) throw DomainError("K_max must be >= 0");
  if (spec.m_max < 1 || spec.m_max > grid.Nt / 2 - 1)
    throw CapabilityError("m_max = " + std::to_string(spec.m_max) + " exceeds the time grid");
  if (!band_resolved(grid, spec.K_max, spec.m_max))
    throw CapabilityError("grid does not resolve the band K_max = " + std::to_string(spec.K_max) +
                          ", m_max = " + std::to_string(spec.m_max));
}

GridFunction bump_function(const TestFunctionSpec& spec, const GridSpec& grid) {
  std::mt19937_64 rng(spec.seed);
  const int n = grid.n;
  double centre[kMaxDim];
  for (int a = 0; a < n; ++a) centre[a] = (uniform01(rng) - 0.5) * 0.5 * grid.x_extent;
  const double t0 = (0.25 + 0.5 * uniform01(rng)) * grid.t_extent;
  const double w = grid.x_extent * (0.15 + 0.15 * uniform01(rng));
  const double wt = 0.25 * grid.t_extent;
  const TensorGrid sg = grid.spatial_grid();
  std::vector<cplx> v(grid.size());
  double x[kMaxDim];
  for (int k = 0; k < grid.Nt; ++k) {
    const double dt = (k * grid.dt() - t0) / wt;
    for (std::size_t i = 0; i < sg.size(); ++i) {
      sg.point(i, std::span<double>(x, static_cast<std::size_t>(n)));
      double rho2 = dt * dt;
      for (int a = 0; a < n; ++a) rho2 += (x[a] - centre[a]) * (x[a] - centre[a]) / (w * w);
      v[static_cast<std::size_t>(k) * sg.size() + i] = rho2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - rho2)) : 0.0;
    }
  }
  return GridFunction(grid, std::move(v));
}

GridFunction normalized(const GridFunction& f) {
  const double nrm = lp_norm(f, 2.0);
  if (nrm == 0.0) return f;
  std::vector<cplx> v(f.values().begin(), f.values().end());
  for (auto& z : v) z /= nrm;
  return GridFunction(f.spec(), std::move(v));
}

}  // namespace

bool band_resolved(const GridSpec& grid, int K_max, int m_max) {
  if (!grid.resolves(K_max)) return false;
  const double top = std::sqrt((2.0 * K_max + grid.n + 2.0) * grid.frequency(m_max));
  return top * grid.dx() <= 0.75 * M_PI;
}

SpectralCoefficients make_test_coefficients(const TestFunctionSpec& spec, const GridSpec& grid) {
  check_band(spec, grid);
  if (spec.kind == TestFunctionKind::bump) return forward_transform(bump_function(spec, grid), spec.K_max);
  SpectralCoefficients c(grid, spec.K_max);
  if (spec.kind == TestFunctionKind::mode) {
    if (spec.mode_m == 0 || std::abs(spec.mode_m) > spec.m_max || spec.mode_degree < 0 || spec.mode_degree > spec.K_max)
      throw DomainError("mode outside the band");
    std::vector<int> alpha(static_cast<std::size_t>(grid.n), 0);
    alpha[0] = spec.mode_degree;
    c.slice(spec.mode_m).set(MultiIndex(alpha), grid.t_extent);
    return c;
  }
  std::mt19937_64 rng(spec.seed);
  const auto ranks = random_ranks(static_cast<std::size_t>(2 * spec.m_max), rng);
  std::size_t slot = 0;
  for (int m = -spec.m_max; m <= spec.m_max; ++m) {
    if (m == 0) continue;
    auto& s = c.slice(m);
    const double slice_damp = std::pow(1.0 + ranks[slot++], -spec.decay);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double a = slice_damp * std::pow(1.0 + s.layout().degree(i), -spec.decay);
      const double re = gaussian(rng), im = gaussian(rng);
      s[i] = a * cplx(re, im);
    }
  }
  return c;
}

GridFunction make_test_function(const TestFunctionSpec& spec, const GridSpec& grid) {
  check_band(spec, grid);
  if (spec.kind == TestFunctionKind::bump) return normalized(bump_function(spec, grid));
  return normalized(inverse_transform(make_test_coefficients(spec, grid)));
}

// ---- operator pipelines

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view s, std::string_view context) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    throw ConfigError("bad number '" + t + "' in stage '" + std::string(context) + "'");
  return v;
}

int parse_int(std::string_view s, std::string_view context) {
  const double v = parse_number(s, context);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw ConfigError("expected an integer in stage '" + std::string(context) + "'");
  return static_cast<int>(v);
}

std::vector<std::string_view> split_args(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

OperatorPipeline::Stage parse_stage(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = trim(text.substr(0, colon));
  const std::string arg = colon == std::string::npos ? std::string() : trim(text.substr(colon + 1));
  auto need_args = [&](std::size_t k) {
    const auto a = split_args(arg);
    if (arg.empty() || a.size() != k)
      throw ConfigError("stage '" + text + "' expects " + std::to_string(k) + " parameter(s)");
    return a;
  };
  auto no_args = [&] {
    if (!arg.empty()) throw ConfigError("stage '" + name + "' takes no parameters");
  };
  OperatorPipeline::Stage st;
  st.text = text;
  if (name == "identity") {
    no_args();
    st.identity = true;
    st.apply = [](const HermiteSlice& s) { return s; };
  } else if (name == "zero") {
    no_args();
    st.apply = [](const HermiteSlice& s) { return HermiteSlice(s.dim(), s.truncation(), s.lambda()); };
  } else if (name == "riesz" && split_args(arg).size() == 2) {
    const auto a = need_args(2);
    const int p = parse_int(a[0], text), q = parse_int(a[1], text);
    if (p < 0 || q < 0) throw ConfigError("riesz orders must be >= 0");
    st.apply = [p, q](const HermiteSlice& s) { return higher_riesz_apply({p, q}, s); };
  } else if (name == "riesz" || name == "riesz-star" || name == "riesz*") {
    const int j = parse_int(need_args(1)[0], text);
    if (j < 1 || j > kMaxDim) throw ConfigError("riesz index out of range in '" + text + "'");
    const RieszSpec rs{j, name == "riesz" ? RieszKind::plain : RieszKind::star};
    st.apply = [rs](const HermiteSlice& s) { return riesz_apply(rs, s); };
  } else if (name == "higher-riesz") {
    const auto a = need_args(2);
    const int p = parse_int(a[0], text), q = parse_int(a[1], text);
    if (p < 0 || q < 0) throw ConfigError("higher-riesz orders must be >= 0");
    st.apply = [p, q](const HermiteSlice& s) { return higher_riesz_apply({p, q}, s); };
  } else if (name == "multiplier") {
    if (arg.empty()) throw ConfigError("multiplier stage needs a symbol");
    auto m = std::make_shared<ScalarSymbol>(parse_symbol(arg));
    st.apply = [m](const HermiteSlice& s) { return apply_scalar_multiplier(*m, s); };
  } else if (name == "bochner") {
    const auto a = need_args(2);
    const double R = parse_number(a[0], text), delta = parse_number(a[1], text);
    if (!(R > 0.0) || delta < 0.0) throw ConfigError("bochner needs R > 0 and delta >= 0");
    st.apply = [R, delta](const HermiteSlice& s) { return bochner_riesz_apply({R, delta}, s); };
  } else if (name == "power") {
    const double sp = parse_number(need_args(1)[0], text);
    st.apply = [sp](const HermiteSlice& s) { return fractional_power_apply(sp, s); };
  } else {
    throw ConfigError("unknown operator stage '" + name + "'");
  }
  return st;
}

}  // namespace

OperatorPipeline OperatorPipeline::parse(std::string_view text) {
  OperatorPipeline p;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find('|', start);
    const std::string part = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (part.empty()) throw ConfigError("empty stage in pipeline '" + std::string(text) + "'");
    p.stages_.push_back(parse_stage(part));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (const auto& s : p.stages_) p.name_ += (p.name_.empty() ? "" : "|") + s.text;
  return p;
}

bool OperatorPipeline::is_identity() const {
  return std::all_of(stages_.begin(), stages_.end(), [](const Stage& s) { return s.identity; });
}

HermiteSlice OperatorPipeline::apply(const HermiteSlice& s) const {
  HermiteSlice out = s;
  for (const auto& st : stages_)
    if (!st.identity) out = st.apply(out);
  return out;
}

SpectralCoefficients OperatorPipeline::apply(const SpectralCoefficients& c) const {
  if (is_identity()) return c;
  auto out = map_slices(c, [this](const HermiteSlice& s) { return apply(s); });
  out.set_dropped_energy(0.0);
  return out;
}

GridFunction OperatorPipeline::apply(const GridFunction& f, int K) const {
  if (is_identity()) return f;
  return inverse_transform(apply(forward_transform(f, K)));
}

// ---- probes

bool refinement_stable(const std::vector<double>& refinement) {
  if (refinement.size() < 2) return false;
  const double base = refinement.front();
  if (base == 0.0) return std::all_of(refinement.begin(), refinement.end(), [](double r) { return r == 0.0; });
  return std::all_of(refinement.begin(), refinement.end(),
                     [&](double r) { return std::abs(r - base) <= kStabilityTolerance * base; });
}

double probe_trial_ratio(const OperatorPipeline& op, double p, const ProbeOptions& opt, std::size_t trial) {
  std::mt19937_64 rng(trial_seed(opt.seed, trial));
  TestFunctionSpec spec = opt.functions;
  spec.seed = rng();
  spec.decay = log_uniform(rng, opt.decay_lo, opt.decay_hi);
  const GridFunction f = make_test_function(spec, opt.grid);
  const double nf = lp_norm(f, p);
  if (nf < kDegenerateNorm) return -1.0;
  return lp_norm(op.apply(f, spec.K_max), p) / nf;
}

namespace {

struct TrialBatch {
  std::vector<double> ratios;  // -1 marks a degenerate trial
  double max() const {
    double m = 0.0;
    for (double r : ratios) m = std::max(m, r);
    return m;
  }
  std::vector<double> kept() const {
    std::vector<double> out;
    for (double r : ratios)
      if (r >= 0.0) out.push_back(r);
    return out;
  }
};

TrialBatch run_trials(std::size_t first, std::size_t count, const std::function<double(std::size_t)>& trial) {
  TrialBatch b;
  b.ratios.resize(count);
  parallel_for(count, [&](std::size_t i) { b.ratios[i] = trial(first + i); });
  return b;
}

void check_probe_inputs(double p, std::size_t trials, double lo, double hi) {
  require_exponent(p);
  if (trials == 0) throw DomainError("probe needs at least one trial");
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("decay range must satisfy 0 < lo <= hi");
}

void finish(NormReport& r, const TrialBatch& base, const std::vector<double>& refinement) {
  r.ratios = base.kept();
  r.skipped = base.ratios.size() - r.ratios.size();
  r.max_ratio = base.max();
  r.refinement = refinement;
  r.stable = refinement_stable(refinement);
}

}  // namespace

NormReport operator_norm_probe(const OperatorPipeline& op, double p, const ProbeOptions& opt) {
  check_probe_inputs(p, opt.trials, opt.decay_lo, opt.decay_hi);
  NormReport r;
  r.kind = "norm";
  r.op = op.name();
  r.p = p;
  r.trials = opt.trials;
  r.seed = opt.seed;
  r.grid = {opt.grid.n, opt.grid.Nx, opt.grid.x_extent, opt.grid.Nt, opt.grid.t_extent};
  r.K = opt.functions.K_max;
  for (int m = 1; m <= opt.functions.m_max; ++m) {
    r.lambdas.push_back(-opt.grid.frequency(m));
    r.lambdas.push_back(opt.grid.frequency(m));
  }
  std::sort(r.lambdas.begin(), r.lambdas.end());

  const auto base = run_trials(0, opt.trials, [&](std::size_t i) { return probe_trial_ratio(op, p, opt, i); });
  std::vector<double> refinement{base.max()};
  if (opt.refine) {
    ProbeOptions fine = opt;
    fine.grid = opt.grid.refined();
    refinement.push_back(run_trials(0, opt.trials, [&](std::size_t i) { return probe_trial_ratio(op, p, fine, i); }).max());
    const auto extra = run_trials(opt.trials, opt.trials, [&](std::size_t i) { return probe_trial_ratio(op, p, opt, i); });
    refinement.push_back(std::max(base.max(), extra.max()));
  }
  finish(r, base, refinement);
  return r;
}

std::vector<double> default_lambdas(std::size_t J, std::uint64_t seed, double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("lambda range must satisfy 0 < lo <= hi");
  std::mt19937_64 rng(splitmix64(seed));
  std::vector<double> out(J);
  for (auto& l : out) l = log_uniform(rng, lo, hi);
  return out;
}

TensorGrid rbound_grid(int n, int K, const std::vector<double>& lambdas, int Nx) {
  if (lambdas.empty()) throw DomainError("empty lambda list");
  double lo = INFINITY, hi = 0.0;
  for (double l : lambdas) {
    if (l == 0.0 || !std::isfinite(l)) throw DomainError("lambda values must be finite and nonzero");
    lo = std::min(lo, std::abs(l));
    hi = std::max(hi, std::abs(l));
  }
  const double band = 2.0 * K + n + 2.0;
  const double L = (std::sqrt(band) + 6.0) / std::sqrt(lo);
  if (Nx <= 0) {
    const double h = 0.6 * M_PI / std::sqrt(band * hi);
    Nx = 64;
    while (2.0 * L / Nx > h) Nx *= 2;
  }
  return uniform_grid(n, Nx, L);
}

std::vector<HermiteSlice> random_slice_family(const std::vector<double>& lambdas, const RBoundOptions& opt, std::size_t trial) {
  std::mt19937_64 rng(trial_seed(opt.seed, trial));
  const double decay = log_uniform(rng, opt.decay_lo, opt.decay_hi);
  const auto ranks = random_ranks(lambdas.size(), rng);
  std::vector<HermiteSlice> fam;
  fam.reserve(lambdas.size());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    HermiteSlice s(opt.n, opt.K, lambdas[j]);
    const double damp = std::pow(1.0 + ranks[j], -decay);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double a = damp * std::pow(1.0 + s.layout().degree(i), -decay);
      const double re = gaussian(rng), im = gaussian(rng);
      s[i] = a * cplx(re, im);
    }
    fam.push_back(std::move(s));
  }
  return fam;
}

namespace {

double square_function_ratio(const std::vector<double>& top, const std::vector<double>& bottom, const TensorGrid& grid, double p) {
  std::vector<double> a(top.size()), b(bottom.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::sqrt(top[i]);
    b[i] = std::sqrt(bottom[i]);
  }
  const double nb = lp_norm(b, grid, p);
  if (nb < kDegenerateNorm) return -1.0;
  return lp_norm(a, grid, p) / nb;
}

NormReport square_function_probe(const std::string& kind, const std::string& name, std::vector<double> lambdas, double p,
                                 const RBoundOptions& opt,
                                 const std::function<double(const std::vector<double>&, const TensorGrid&, std::size_t)>& trial) {
  check_probe_inputs(p, opt.trials, opt.decay_lo, opt.decay_hi);
  if (opt.n < 1 || opt.n > kMaxDim || opt.K < 0) throw DomainError("bad dimension or truncation");
  std::sort(lambdas.begin(), lambdas.end());
  const TensorGrid grid = rbound_grid(opt.n, opt.K, lambdas, opt.Nx);
  NormReport r;
  r.kind = kind;
  r.op = name;
  r.p = p;
  r.trials = opt.trials;
  r.seed = opt.seed;
  r.lambdas = lambdas;
  r.K = opt.K;
  r.grid = {opt.n, static_cast<int>(grid.points_per_axis()), -grid.nodes.front(), 0, 0.0};

  const auto base = run_trials(0, opt.trials, [&](std::size_t i) { return trial(lambdas, grid, i); });
  std::vector<double> refinement{base.max()};
  if (opt.refine) {
    const TensorGrid fine = uniform_grid(opt.n, static_cast<int>(2 * grid.points_per_axis()), -grid.nodes.front());
    refinement.push_back(run_trials(0, opt.trials, [&](std::size_t i) { return trial(lambdas, fine, i); }).max());
    const auto extra = run_trials(opt.trials, opt.trials, [&](std::size_t i) { return trial(lambdas, grid, i); });
    refinement.push_back(std::max(base.max(), extra.max()));
  }
  finish(r, base, refinement);
  return r;
}

}  // namespace

NormReport r_bound_probe(const OperatorPipeline& family, std::vector<double> lambdas, double p, const RBoundOptions& opt) {
  return square_function_probe("rbound", family.name(), std::move(lambdas), p, opt,
                               [&](const std::vector<double>& lams, const TensorGrid& grid, std::size_t i) {
                                 const auto fam = random_slice_family(lams, opt, i);
                                 std::vector<double> top(grid.size(), 0.0), bottom(grid.size(), 0.0);
                                 for (const auto& f : fam) {
                                   const auto v = synthesize_on_grid(f, grid);
                                   const auto w = synthesize_on_grid(family.apply(f), grid);
                                   for (std::size_t k = 0; k < v.size(); ++k) {
                                     bottom[k] += std::norm(v[k]);
                                     top[k] += std::norm(w[k]);
                                   }
                                 }
                                 return square_function_ratio(top, bottom, grid, p);
                               });
}

NormReport fefferman_stein_probe(std::vector<double> lambdas, double p, const RBoundOptions& opt) {
  return square_function_probe("fefferman-stein", "maximal", std::move(lambdas), p, opt,
                               [&](const std::vector<double>& lams, const TensorGrid& grid, std::size_t i) {
                                 const auto fam = random_slice_family(lams, opt, i);
                                 std::vector<double> top(grid.size(), 0.0), bottom(grid.size(), 0.0);
                                 std::vector<double> g(grid.size());
                                 for (const auto& f : fam) {
                                   const auto v = synthesize_on_grid(f, grid);
                                   for (std::size_t k = 0; k < v.size(); ++k) g[k] = std::abs(v[k]);
                                   const auto M = hardy_littlewood_maximal(g, grid);
                                   for (std::size_t k = 0; k < v.size(); ++k) {
                                     bottom[k] += g[k] * g[k];
                                     top[k] += M.values[k] * M.values[k];
                                   }
                                 }
                                 return square_function_ratio(top, bottom, grid, p);
                               });
}

// ---- kernel scaling

cplx multiplier_kernel(const ScalarSymbol& m, int K, double lambda, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty() || x.size() > static_cast<std::size_t>(kMaxDim)) throw DomainError("bad point dimension");
  const int n = static_cast<int>(x.size());
  const auto layout = SimplexLayout::get(n, K);
  const double a = std::abs(lambda);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < layout->size(); ++i) {
    const auto& alpha = layout->at(i);
    sum += m((2.0 * alpha.degree() + n) * a) * hermite_eval(alpha, lambda, x) * hermite_eval(alpha, lambda, y);
  }
  return sum;
}

cplx multiplier_kernel_lambda_derivative(const ScalarSymbol& m, int K, double lambda, std::span<const double> x,
                                         std::span<const double> y) {
  if (x.size() != y.size() || x.empty() || x.size() > static_cast<std::size_t>(kMaxDim)) throw DomainError("bad point dimension");
  if (lambda == 0.0) throw DomainError("lambda must be nonzero");
  const int n = static_cast<int>(x.size());
  const double a = std::abs(lambda), ra = std::sqrt(a);
  // Per axis: h_k(sqrt(a) x), h_k'(sqrt(a) x) and d/da h_k(sqrt(a) x) = h_k'(.) x / (2 sqrt a).
  std::vector<std::vector<double>> hx(n), hy(n), dx(n), dy(n);
  for (int ax = 0; ax < n; ++ax) {
    hx[ax].resize(K + 1);
    hy[ax].resize(K + 1);
    dx[ax].resize(K + 1);
    dy[ax].resize(K + 1);
    hermite_functions(ra * x[ax], hx[ax]);
    hermite_functions(ra * y[ax], hy[ax]);
    hermite_function_derivatives(ra * x[ax], dx[ax]);
    hermite_function_derivatives(ra * y[ax], dy[ax]);
    for (int k = 0; k <= K; ++k) {
      dx[ax][k] *= x[ax] / (2.0 * ra);
      dy[ax][k] *= y[ax] / (2.0 * ra);
    }
  }
  const auto layout = SimplexLayout::get(n, K);
  cplx sum0 = 0.0, sum1 = 0.0;
  for (std::size_t i = 0; i < layout->size(); ++i) {
    const auto& alpha = layout->at(i);
    const double mu = 2.0 * alpha.degree() + n;
    double prod = 1.0, dprod = 0.0;
    for (int ax = 0; ax < n; ++ax) {
      const int k = alpha[ax];
      const double px = hx[ax][k] * hy[ax][k];
      const double dp = dx[ax][k] * hy[ax][k] + hx[ax][k] * dy[ax][k];
      dprod = dprod * px + prod * dp;
      prod *= px;
    }
    sum0 += m(a * mu) * prod;
    sum1 += m.derivative(1, a * mu) * mu * prod + m(a * mu) * dprod;
  }
  const double scale = std::pow(a, 0.5 * n);
  const cplx d = 0.5 * n * std::pow(a, 0.5 * n - 1.0) * sum0 + scale * sum1;
  return lambda > 0.0 ? d : -d;
}

KernelDerivativeCheck kernel_lambda_derivative_check(const ScalarSymbol& m, int K, double lambda, std::span<const double> x,
                                                     std::span<const double> y) {
  const double h = 1e-3 * std::abs(lambda);
  auto central = [&](double step) {
    return (multiplier_kernel(m, K, lambda + step, x, y) - multiplier_kernel(m, K, lambda - step, x, y)) / (2.0 * step);
  };
  KernelDerivativeCheck c;
  c.finite_difference = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  c.analytic = multiplier_kernel_lambda_derivative(m, K, lambda, x, y);
  c.relative_error = std::abs(c.finite_difference - c.analytic) / std::max(std::abs(c.analytic), 1e-300);
  return c;
}

}  // namespace grushin
