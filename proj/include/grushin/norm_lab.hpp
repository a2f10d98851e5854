#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "grushin/calculus.hpp"
#include "grushin/hermite.hpp"
#include "grushin/lp.hpp"
#include "grushin/transform.hpp"

namespace grushin {

std::uint64_t splitmix64(std::uint64_t x);
// Sub-seed of trial i, independent of scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

enum class TestFunctionKind { hermite_random, bump, mode };

std::string_view to_string(TestFunctionKind k);
TestFunctionKind parse_test_function_kind(std::string_view s);  // ConfigError

struct TestFunctionSpec {
  TestFunctionKind kind = TestFunctionKind::hermite_random;
  int K_max = 8;
  int m_max = 4;
  std::uint64_t seed = 1;
  // hermite_random: amplitudes N(0,1) (1+|alpha|)^{-decay} (1+r_m)^{-decay}, where
  // r_m is the rank of slice m in a seeded random ordering of the active slices.
  double decay = 1.0;
  // mode: Phi_alpha e^{-i lambda_m t} with alpha = (mode_degree, 0, ..)
  int mode_degree = 0;
  int mode_m = 1;
};

// Band check used by make_test_function: the box resolves K_max and the
// spacing resolves sqrt((2K_max+n+2) lambda(m_max)) with margin.
bool band_resolved(const GridSpec& grid, int K_max, int m_max);

// Unit L^2 energy on the grid. hermite_random and mode are band-limited
// (zero beyond K_max and |m| > m_max); bump is a smooth compactly supported
// function at a seeded centre. Throws CapabilityError when the band is not resolved.
GridFunction make_test_function(const TestFunctionSpec& spec, const GridSpec& grid);
SpectralCoefficients make_test_coefficients(const TestFunctionSpec& spec, const GridSpec& grid);

// Slice-wise operator built from named stages joined by '|':
//   identity, zero, riesz:j, riesz-star:j (or riesz*:j), higher-riesz:p,q (or riesz:p,q),
//   multiplier:<symbol>,
//   bochner:R,delta, power:s
// Unknown names or bad parameters throw ConfigError.
class OperatorPipeline {
 public:
  struct Stage {
    std::string text;
    std::function<HermiteSlice(const HermiteSlice&)> apply;
    bool identity = false;
  };

  OperatorPipeline() = default;
  static OperatorPipeline parse(std::string_view text);

  const std::string& name() const { return name_; }
  const std::vector<Stage>& stages() const { return stages_; }
  bool is_identity() const;

  HermiteSlice apply(const HermiteSlice& s) const;
  SpectralCoefficients apply(const SpectralCoefficients& c) const;
  // Through the transform at truncation K; identity pipelines return f unchanged.
  GridFunction apply(const GridFunction& f, int K) const;

 private:
  std::string name_;
  std::vector<Stage> stages_;
};

struct ReportGrid {
  int n = 1;
  int Nx = 0;
  double x_extent = 0.0;
  int Nt = 0;  // 0 for spatial-only probes
  double t_extent = 0.0;
};

struct NormReport {
  std::string kind;  // norm, rbound, fefferman-stein, bochner-ceiling
  std::string op;
  double p = 2.0;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  std::uint64_t seed = 0;
  std::vector<double> ratios;      // base run, one per non-skipped trial
  double max_ratio = 0.0;
  std::vector<double> refinement;  // max ratio at [base, 2x grid, 2x trials]
  std::vector<double> lambdas;
  bool stable = false;
  ReportGrid grid;
  int K = 0;
  std::string note = "empirical lower bound with refinement evidence, not a proof";
};

inline constexpr double kStabilityTolerance = 0.25;
inline constexpr double kDegenerateNorm = 1e-14;

// Every refined maximum within 25% of the base maximum (all zero counts as stable).
bool refinement_stable(const std::vector<double>& refinement);

struct ProbeOptions {
  GridSpec grid;
  TestFunctionSpec functions;  // kind and band limits; seed and decay are set per trial
  std::size_t trials = 64;
  std::uint64_t seed = 1;
  double decay_lo = 0.1;  // per-trial decay is log-uniform in [decay_lo, decay_hi]
  double decay_hi = 16.0;
  bool refine = true;
};

// Ratio ||op f||_p / ||f||_p for trial i (f from trial_seed(seed, i)); negative
// when the trial is degenerate.
double probe_trial_ratio(const OperatorPipeline& op, double p, const ProbeOptions& opt, std::size_t trial);

NormReport operator_norm_probe(const OperatorPipeline& op, double p, const ProbeOptions& opt);

struct RBoundOptions {
  int n = 1;
  int K = 8;
  std::size_t trials = 64;
  std::uint64_t seed = 1;
  double decay_lo = 0.1;
  double decay_hi = 16.0;
  int Nx = 0;  // 0: smallest power of two resolving all lambdas
  bool refine = true;
};

// J values log-uniform in [lo, hi], drawn from the seed.
std::vector<double> default_lambdas(std::size_t J, std::uint64_t seed, double lo = 0.1, double hi = 10.0);

// Uniform spatial grid covering the mode-K functions at every lambda.
TensorGrid rbound_grid(int n, int K, const std::vector<double>& lambdas, int Nx = 0);

// The random slices f_j of one trial; lambdas must already be sorted.
std::vector<HermiteSlice> random_slice_family(const std::vector<double>& lambdas, const RBoundOptions& opt, std::size_t trial);

// ||(sum_j |T(lambda_j) f_j|^2)^{1/2}||_p / ||(sum_j |f_j|^2)^{1/2}||_p over random
// band-limited f_j; lambdas are sorted first, so the result ignores their order.
NormReport r_bound_probe(const OperatorPipeline& family, std::vector<double> lambdas, double p, const RBoundOptions& opt);

// Same square-function ratio with T = Hardy-Littlewood maximal operator applied to |f_j|.
NormReport fefferman_stein_probe(std::vector<double> lambdas, double p, const RBoundOptions& opt);

// Kernel of m(H(lambda)) as a truncated eigen-sum sum_{|alpha|<=K} m(mu_alpha) Phi_alpha^lambda(x) Phi_alpha^lambda(y),
// and its lambda-derivative from the scaling form lambda^{n/2} m_lambda(H)(lambda^{1/2} x, lambda^{1/2} y).
cplx multiplier_kernel(const ScalarSymbol& m, int K, double lambda, std::span<const double> x, std::span<const double> y);
cplx multiplier_kernel_lambda_derivative(const ScalarSymbol& m, int K, double lambda, std::span<const double> x,
                                           std::span<const double> y);

struct KernelDerivativeCheck {
  cplx finite_difference;
  cplx analytic;
  double relative_error = 0.0;
};

// Central difference of multiplier_kernel in lambda (step 1e-3 lambda, Richardson) against the analytic derivative.
KernelDerivativeCheck kernel_lambda_derivative_check(const ScalarSymbol& m, int K, double lambda,
                                                     std::span<const double> x, std::span<const double> y);

}  // namespace grushin
