#include "grushin/verify/acceptance.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "grushin/bochner.hpp"
#include "grushin/calculus.hpp"
#include "grushin/gfunc.hpp"
#include "grushin/hermite.hpp"
#include "grushin/norm_lab.hpp"
#include "grushin/riesz.hpp"
#include "grushin/transform.hpp"

namespace grushin::verify {

namespace {

constexpr double kOrthoTol = 1e-12;
constexpr double kLadderTol = 1e-6;
constexpr double kMehlerTol = 1e-10;
constexpr double kScalingTol = 1e-12;
constexpr double kRoundTripTol = 1e-8;
constexpr double kParsevalTol = 1e-6;
constexpr double kAlgebraTol = 1e-12;
constexpr double kExactTol = 1e-14;
constexpr double kRieszNormTol = 0.02;
constexpr double kHormanderTol = 0.05;
constexpr double kGConstantTol = 1e-6;
constexpr double kSpreadTol = 0.25;
constexpr double kConjugationTol = 1e-13;
constexpr double kCovarianceTol = 1e-4;
constexpr double kCZRefineTol = 0.10;
constexpr double kCZScaleTol = 1e-6;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

HermiteSlice random_slice(int n, int K, double lambda, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  HermiteSlice s(n, K, lambda);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {N(rng), N(rng)};
  return s;
}

double max_diff(const HermiteSlice& a, const HermiteSlice& b) {
  const std::size_t m = std::max(a.size(), b.size());
  const int K = std::max(a.truncation(), b.truncation());
  const auto pa = a.with_truncation(K), pb = b.with_truncation(K);
  double w = 0.0;
  for (std::size_t i = 0; i < m; ++i) w = std::max(w, std::abs(pa[i] - pb[i]));
  return w;
}

struct Outcome {
  bool passed;
  std::string detail;
};

// ---- 1
Outcome basis_exactness() {
  double worst = 0.0;
  const int K = 32;
  for (int n = 1; n <= 2; ++n)
    for (double lam : {0.5, 1.0, 2.0}) {
      const TensorGrid grid = gauss_hermite_grid(n, 2 * K + 2, lam);
      HermiteSlice unit(n, K, lam);
      for (std::size_t i = 0; i < unit.size(); ++i) {
        unit[i] = 1.0;
        const auto back = analyze_on_grid(synthesize_on_grid(unit, grid), grid, lam, K);
        for (std::size_t j = 0; j < back.size(); ++j) worst = std::max(worst, std::abs(back[j] - (i == j ? 1.0 : 0.0)));
        unit[i] = 0.0;
      }
    }
  return {worst < kOrthoTol, "max |(Phi_a,Phi_b) - delta| = " + sci(worst) + " (n = 1,2, |alpha| <= 32) < " + sci(kOrthoTol)};
}

// ---- 2
template <class F>
double central_derivative(F&& g, double x, double h) {
  static constexpr double c[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double d = 0.0;
  for (int k = 1; k <= 4; ++k) d += c[k - 1] * (g(x + k * h) - g(x - k * h));
  return d / h;
}

Outcome ladder_oracle() {
  double worst = 0.0;
  const int K = 20;
  for (double lam : {0.9, -1.4}) {
    const double s = std::sqrt(std::abs(lam));
    for (int a = 0; a <= K; ++a) {
      const auto unit = HermiteSlice::unit(K, lam, MultiIndex({a}));
      for (auto kind : {LadderKind::creation, LadderKind::annihilation}) {
        const auto out = ladder_apply(unit, 1, kind);
        const double dsign = kind == LadderKind::creation ? -1.0 : 1.0;
        double err = 0.0, scale = 0.0;
        for (double u : {-2.3, -1.1, -0.4, 0.35, 0.8, 1.7, 2.6}) {
          const double x = u / s;
          auto phi = [&](double v) {
            const double pt[] = {v};
            return hermite_eval(MultiIndex({a}), lam, pt);
          };
          const double fd = dsign * central_derivative(phi, x, 1e-3 / s) + lam * x * phi(x);
          const double pt[] = {x};
          const cplx got = hermite_synthesize(out, pt)[0];
          err = std::max(err, std::abs(got - fd));
          scale = std::max(scale, std::abs(fd) + s * std::abs(phi(x)));
        }
        worst = std::max(worst, err / scale);
      }
    }
  }
  return {worst < kLadderTol, "max relative error = " + sci(worst) + " (|alpha| <= 20, lambda = 0.9, -1.4) < " + sci(kLadderTol)};
}

// ---- 3
double normalized_hermite(unsigned k, double x) {
  const double log_norm = 0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0) + 0.5 * std::log(std::numbers::pi));
  return boost::math::hermite(k, x) * std::exp(-0.5 * x * x - log_norm);
}

Outcome mehler_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> X(-3.0, 3.0), T(0.1, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double x = X(rng), y = X(rng), t = T(rng);
    // terms beyond k = 140 are below e^{-28} at t >= 0.1
    double sum = 0.0;
    for (unsigned k = 0; k <= 140; ++k) sum += std::exp(-(2.0 * k + 1.0) * t) * normalized_hermite(k, x) * normalized_hermite(k, y);
    const double px[] = {x}, py[] = {y};
    worst = std::max(worst, std::abs(mehler_kernel(t, 1.0, px, py) - sum));
  }
  double scaling = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const double x = X(rng), y = X(rng), t = T(rng);
    for (double lam : {0.5, 2.0, -1.5}) {
      const double r = std::sqrt(std::abs(lam));
      const double px[] = {x}, py[] = {y}, qx[] = {r * x}, qy[] = {r * y};
      const double lhs = mehler_kernel(t, lam, px, py);
      const double rhs = r * mehler_kernel(std::abs(lam) * t, 1.0, qx, qy);
      scaling = std::max(scaling, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300));
    }
  }
  return {worst < kMehlerTol && scaling < kScalingTol,
          "max |closed form - eigen-sum| = " + sci(worst) + " < " + sci(kMehlerTol) + "; scaling residual " + sci(scaling) +
              " < " + sci(kScalingTol)};
}

// ---- 4
Outcome plancherel() {
  double rt = 0.0, parseval = 0.0;
  struct Case {
    GridSpec spec;
    int K, m_max;
  };
  const Case cases[] = {{{1, 64, 8.0, 64, 2 * std::numbers::pi}, 6, 3}, {{2, 64, 8.0, 64, 2 * std::numbers::pi}, 6, 3}};
  for (const auto& cs : cases) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      TestFunctionSpec t;
      t.K_max = cs.K;
      t.m_max = cs.m_max;
      t.seed = seed;
      t.decay = 0.5;
      const auto c = make_test_coefficients(t, cs.spec);
      const auto f = inverse_transform(c);
      const auto c2 = forward_transform(f, cs.K);
      const auto f2 = inverse_transform(c2);
      double cmax = 0.0, cerr = 0.0, fmax = 0.0, ferr = 0.0;
      for (std::size_t s = 0; s < c.slice_count(); ++s)
        for (std::size_t i = 0; i < c.slices()[s].size(); ++i) {
          cmax = std::max(cmax, std::abs(c.slices()[s][i]));
          cerr = std::max(cerr, std::abs(c.slices()[s][i] - c2.slices()[s][i]));
        }
      for (std::size_t i = 0; i < f.values().size(); ++i) {
        fmax = std::max(fmax, std::abs(f.values()[i]));
        ferr = std::max(ferr, std::abs(f.values()[i] - f2.values()[i]));
      }
      rt = std::max({rt, cerr / cmax, ferr / fmax});
      const double e = lp_norm(f, 2.0);
      parseval = std::max(parseval, std::abs(e * e / c.parseval_energy() - 1.0));
    }
  }
  return {rt < kRoundTripTol && parseval < kParsevalTol,
          "round trip " + sci(rt) + " < " + sci(kRoundTripTol) + "; Parseval " + sci(parseval) + " < " + sci(kParsevalTol)};
}

// ---- 5
Outcome operator_algebra() {
  std::mt19937_64 rng(5);
  double comm = 0.0;
  for (double lam : {0.8, -1.9})
    for (int n = 1; n <= 2; ++n) {
      const auto f = random_slice(n, 9, lam, rng);
      // A_j(lambda) shifts the eigenvalue by +2 lambda: raises for lambda > 0, lowers for lambda < 0.
      for (int j = 1; j <= n; ++j) {
        const auto lhs = fractional_power_apply(-0.5, ladder_apply(f, j, LadderKind::creation));
        // (H + 2 lambda)^{-1/2}; for lambda < 0 only on modes that A_j does not annihilate
        HermiteSlice shifted(f.dim(), f.truncation(), lam);
        if (lam > 0.0) {
          shifted = shifted_power_apply(2.0, 0.5, f);
        } else {
          for (std::size_t i = 0; i < f.size(); ++i) {
            const double mu = f.spectral_value(i) + 2.0 * lam;
            if (mu > 0.0) shifted[i] = f[i] / std::sqrt(mu);
          }
        }
        const auto rhs = ladder_apply(shifted, j, LadderKind::creation);
        comm = std::max(comm, max_diff(lhs, rhs));
      }
    }
  const auto e0 = HermiteSlice::unit(0, 1.0, MultiIndex({0}));
  const double diff = (shifted_power_apply(0.0, 0.5, e0)[0] - shifted_power_apply(2.0, 0.5, e0)[0]).real();
  const double quad = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double s) { return std::pow(1.0 + 2.0 * s, -1.5); }, 0.0, 1.0);
  const double resolvent = std::max(std::abs(diff - (1.0 - 1.0 / std::sqrt(3.0))), std::abs(diff - quad));

  std::uniform_real_distribution<double> L(0.01, 0.4), D(0.0, 3.0);
  std::uniform_int_distribution<int> Kd(0, 12);
  double identity = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double lam = L(rng) * (i % 2 ? -1.0 : 1.0), delta = D(rng);
    const auto e = HermiteSlice::unit(12, lam, MultiIndex({Kd(rng)}));
    HermiteSlice a = bochner_riesz_apply({1.0, delta}, e);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] *= e.spectral_value(j);
    const auto b = bochner_riesz_apply({1.0, delta}, e), c = bochner_riesz_apply({1.0, delta + 1.0}, e);
    for (std::size_t j = 0; j < a.size(); ++j) identity = std::max(identity, std::abs(a[j] - (b[j] - c[j])));
  }
  return {comm < kAlgebraTol && resolvent < kAlgebraTol && identity < kExactTol,
          "commutation " + sci(comm) + ", resolvent " + sci(resolvent) + " < " + sci(kAlgebraTol) + "; mu(1-mu)_+^d identity " +
              sci(identity) + " < " + sci(kExactTol)};
}

// ---- 6
Outcome riesz_norm() {
  ProbeOptions opt;
  opt.trials = 256;
  opt.refine = false;
  const auto r = operator_norm_probe(OperatorPipeline::parse("riesz:1"), 2.0, opt);
  const double rel = std::abs(r.max_ratio / std::sqrt(2.0) - 1.0);
  return {rel < kRieszNormTol, "max ratio " + sci(r.max_ratio) + " vs sqrt 2, relative gap " + sci(rel) + " < " + sci(kRieszNormTol)};
}

// ---- 7
Outcome lambda_uniformity() {
  std::mt19937_64 rng(7);
  const auto base = random_slice(1, 10, 1.0, rng);
  bool identical = true;
  for (double sign : {1.0, -1.0}) {
    std::optional<HermiteSlice> ref;
    for (double a : {0.3, 1.0, 7.0}) {
      const HermiteSlice s(1, 10, sign * a, std::vector<cplx>(base.coeffs().begin(), base.coeffs().end()));
      const auto out = riesz_apply({1, RieszKind::plain}, s);
      if (ref) identical = identical && std::equal(out.coeffs().begin(), out.coeffs().end(), ref->coeffs().begin());
      else ref = out;
    }
  }
  std::string detail = std::string("coefficient action ") + (identical ? "identical" : "differs") + " across lambda;";
  bool stable = true;
  const auto lams = default_lambdas(8, 17);
  for (double p : {1.5, 2.0, 4.0}) {
    RBoundOptions opt;
    opt.trials = 64;
    const auto r = r_bound_probe(OperatorPipeline::parse("riesz:1"), lams, p, opt);
    stable = stable && r.stable;
    detail += " p=" + sci(p) + ": max " + sci(r.max_ratio) + " refined " + sci(r.refinement[1]) + " 2x trials " + sci(r.refinement[2]) + ";";
  }
  return {identical && stable, detail + " tolerance 25%"};
}

// ---- 8
Outcome multiplier_bounds() {
  const auto rat = hormander_check(symbol_rational(), 2);
  const auto imag = hormander_check(symbol_imaginary_power(2.0), 2);
  const double want_rat[] = {0.5, 0.25, 8.0 / 27.0};
  const double want_imag[] = {1.0, 2.0, 2.0 * std::sqrt(5.0)};
  double dev = 0.0;
  for (int k = 0; k <= 2; ++k) {
    dev = std::max(dev, std::abs(rat.sup[k] / want_rat[k] - 1.0));
    dev = std::max(dev, std::abs(imag.sup[k] / want_imag[k] - 1.0));
  }
  bool ok = rat.bounded && imag.bounded && dev < kHormanderTol;
  std::string detail = "S_k deviation " + sci(dev) + " < " + sci(kHormanderTol) + ";";
  const auto lams = default_lambdas(8, 23);
  for (const char* op : {"multiplier:rational", "multiplier:imaginary-power:2"}) {
    for (double p : {1.5, 4.0}) {
      RBoundOptions opt;
      opt.trials = 64;
      const auto r = r_bound_probe(OperatorPipeline::parse(op), lams, p, opt);
      ok = ok && r.stable;
      detail += std::string(" ") + op + " p=" + sci(p) + " max " + sci(r.max_ratio) + (r.stable ? " stable;" : " unstable;");
    }
  }
  return {ok, detail};
}

// ---- 9
Outcome g_constants() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> L(-1.0, 1.0);
  double g1 = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double lam = std::pow(10.0, L(rng)) * (i % 2 ? -1.0 : 1.0);
    const auto f = random_slice(1, 10, lam, rng);
    const auto grid = gauss_hermite_grid(1, 22, lam);
    const double r = lp_norm(g_k_eval({1, {}}, f, grid), grid, 2.0) / std::sqrt(f.norm_squared());
    g1 = std::max(g1, std::abs(r / 0.5 - 1.0));
  }
  double gk = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const auto f = random_slice(2, 8, 1.3, rng);
    const auto grid = gauss_hermite_grid(2, 18, 1.3);
    const double nrm = lp_norm(g_k_eval({k, {}}, f, grid), grid, 2.0);
    const double want = std::tgamma(2.0 * k) * std::pow(4.0, -k);
    gk = std::max(gk, std::abs(nrm * nrm / f.norm_squared() / want - 1.0));
  }
  std::vector<HermiteSlice> fam;
  for (int i = 0; i < 8; ++i) fam.push_back(random_slice(1, 8, 1.0, rng));
  const auto rep = g_norm_equivalence_report(fam, 4.0, {0.5, 1.0, 2.0, 4.0});
  return {g1 < kGConstantTol && gk < kGConstantTol && rep.spread < kSpreadTol,
          "||g_1 f||/||f|| vs 1/2: " + sci(g1) + ", Gamma(2k)4^-k: " + sci(gk) + " < " + sci(kGConstantTol) + "; lambda spread at p=4 " +
              sci(rep.spread) + " < " + sci(kSpreadTol)};
}

// ---- 10
Outcome bochner_riesz() {
  std::mt19937_64 rng(10);
  double conj = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (double lam : {0.3, -0.07, 1.9})
      for (double delta : {0.0, 0.7, 1.5}) {
        const auto f = random_slice(n, 14, lam, rng);
        const double a = std::abs(lam);
        const auto direct = bochner_riesz_apply({1.0, delta}, f);
        const auto via = dilate_slice(hermite_bochner_riesz({1.0 / a, delta}, dilate_slice(f, 1.0 / a)), a);
        conj = std::max(conj, max_diff(direct, via));
      }

  const GridSpec spec{1, 128, 10.0, 32, 4 * std::numbers::pi};
  std::normal_distribution<double> N(0.0, 1.0);
  SpectralCoefficients c(spec, 6);
  for (int m = -2; m <= 2; ++m) {
    if (m == 0) continue;
    auto& s = c.slice(m);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.layout().degree(i) <= 3) s[i] = {N(rng), N(rng)};
  }
  const GridFunction f = inverse_transform(c);
  double cov = 0.0;
  const double r = 2.0;
  for (double R : {3.0, 6.0, 11.0})
    for (double delta : {0.0, 1.0, 1.7}) {
      const auto lhs = inverse_transform(bochner_riesz_apply({R, delta}, forward_transform(nonisotropic_dilate(f, {r}), 6)));
      const auto rhs = nonisotropic_dilate(inverse_transform(bochner_riesz_apply({R / (r * r), delta}, forward_transform(f, 6))), {r});
      double worst = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < lhs.values().size(); ++i) {
        worst = std::max(worst, std::abs(lhs.values()[i] - rhs.values()[i]));
        scale = std::max(scale, std::abs(rhs.values()[i]));
      }
      cov = std::max(cov, worst / std::max(scale, 1.0));
    }

  const double delta = (1.0 + 1.0) / 2.0 + 1.0 / 6.0 + 0.1;
  ProbeOptions opt;
  opt.grid = {1, 64, 10.0, 64, 8 * std::numbers::pi};
  opt.functions.K_max = 6;
  opt.functions.m_max = 8;
  opt.trials = 32;
  bool stable = true;
  std::string probe;
  for (double p : {1.5, 4.0}) {
    std::vector<double> ceiling(3, 0.0);
    for (double R : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto rep = operator_norm_probe(OperatorPipeline::parse("bochner:" + sci(R) + "," + std::to_string(delta)), p, opt);
      for (std::size_t i = 0; i < 3; ++i) ceiling[i] = std::max(ceiling[i], rep.refinement[i]);
    }
    stable = stable && refinement_stable(ceiling);
    probe += " p=" + sci(p) + " ceiling " + sci(ceiling[0]) + "/" + sci(ceiling[1]) + "/" + sci(ceiling[2]) + ";";
  }
  return {conj < kConjugationTol && cov < kCovarianceTol && stable,
          "conjugation " + sci(conj) + " < " + sci(kConjugationTol) + "; covariance " + sci(cov) + " < " + sci(kCovarianceTol) + ";" +
              probe + " tolerance 25%"};
}

// ---- 11
Outcome maximal_domination() {
  std::mt19937_64 rng(11);
  std::vector<HermiteSlice> fam;
  for (int i = 0; i < 16; ++i) fam.push_back(random_slice(1, 8, 1.0, rng));
  const auto rep = maximal_domination_check(fam, 1.0, uniform_grid(1, 64, 8.0));
  RBoundOptions opt;
  opt.trials = 32;
  const auto fs = fefferman_stein_probe(default_lambdas(8, 31), 2.0, opt);
  return {std::isfinite(rep.c_emp) && rep.stable && fs.stable,
          "C_emp " + sci(rep.c_emp) + " refined " + sci(rep.c_emp_refined) + " (change " + sci(rep.relative_change) +
              "); Fefferman-Stein max " + sci(fs.refinement[0]) + "/" + sci(fs.refinement[1]) + "/" + sci(fs.refinement[2]) +
              "; tolerance 25%"};
}

// ---- 12
Outcome cz_profile_check() {
  const TensorGrid g = uniform_grid(1, 24, 3.0);
  const auto r = cz_profile_refinement(1, 1.0, g);
  double scale = 0.0;
  for (double lam : {0.5, 2.0}) {
    TensorGrid gl = g;
    for (auto& v : gl.nodes) v /= std::sqrt(lam);
    scale = std::max(scale, std::abs(cz_profile(1, lam, gl).sup / r.base.sup - 1.0));
  }
  return {std::isfinite(r.base.sup) && r.relative_change < kCZRefineTol && scale < kCZScaleTol,
          "sup " + sci(r.base.sup) + ", t-refinement change " + sci(r.relative_change) + " < " + sci(kCZRefineTol) +
              "; lambda-scaled mismatch " + sci(scale) + " < " + sci(kCZScaleTol)};
}

struct Entry {
  const char* title;
  Outcome (*run)();
};

const Entry kEntries[kCriterionCount] = {
    {"basis exactness", basis_exactness},
    {"ladder oracle", ladder_oracle},
    {"mehler oracle", mehler_oracle},
    {"plancherel round trip", plancherel},
    {"exact operator algebra", operator_algebra},
    {"riesz L2 norm", riesz_norm},
    {"lambda uniformity", lambda_uniformity},
    {"spectral multiplier bounds", multiplier_bounds},
    {"g-function constants", g_constants},
    {"bochner-riesz", bochner_riesz},
    {"maximal domination", maximal_domination},
    {"CZ kernel profile", cz_profile_check},
};

}  // namespace

std::string criterion_title(int id) {
  if (id < 1 || id > kCriterionCount) return "unknown";
  return kEntries[id - 1].title;
}

CriterionResult run_criterion(int id) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  if (id < 1 || id > kCriterionCount) {
    r.detail = "no such criterion";
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = kEntries[id - 1].run();
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_suite(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i));
  } else {
    for (int i : ids) out.push_back(run_criterion(i));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %02d %s | ", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.1fs)", r.seconds);
  return head + r.detail + tail;
}

}  // namespace grushin::verify
