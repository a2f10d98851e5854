#pragma once

#include <optional>
#include <span>
#include <vector>

#include "grushin/calculus.hpp"
#include "grushin/hermite.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/tensor_grid.hpp"

namespace grushin {

// Square functions of the semigroup T_t = e^{-t H(lambda)} on one slice:
//   g_k(f,x)^2  = int_0^inf |d_t^k T_t f(x)|^2 t^{2k-1} dt,
//   g*_k(f,x)^2 = int int t^{-n/2} (1 + |x-y|^2/t)^{-k} |d_t T_t f(y)|^2 t dt dy.
struct GFunctionSpec {
  int k = 1;
  LineRule t_rule;  // empty: default_g_rule for the slice
};

// 160 log-spaced nodes over [1e-6/((2K+n)|lambda|), 20/(n|lambda|)], trapezoid in log t.
LineRule default_g_rule(int n, int K, double lambda, int nodes = 160);

// Gamma(2k)^{1/2} 2^{-k}.
double g_isometry_constant(int k);

// Throws DomainError for k < 1 or a rule with non-positive weights.
std::vector<double> g_k_eval(const GFunctionSpec& spec, const HermiteSlice& slice, const TensorGrid& points);

// Uniform grid used for the y-integral of g* when none is given:
// half width (sqrt(2K+n) + 6)/sqrt|lambda|, 256 points per axis for n = 1, 48 otherwise.
TensorGrid default_g_star_grid(int n, int K, double lambda);

struct GStarResult {
  std::vector<double> values;
  bool k_admissible = false;  // k > n/2
};

GStarResult g_star_eval(const GFunctionSpec& spec, const HermiteSlice& slice, const TensorGrid& points,
                        const std::optional<TensorGrid>& y_grid = std::nullopt);

// Keeping only the y-cell of x in g*_k gives w_x t_max^{-n/2} g_1(f,x)^2 or more,
// so (g*_k)^2 >= c_grid g_1^2 on grid points. Both sides use `grid` for x and y.
struct GStarCellBound {
  double c_grid = 0.0;
  double min_ratio = 0.0;  // min over x with g_1 > 0 of g*^2 / (c_grid g_1^2)
  bool holds = false;
};

GStarCellBound g_star_cell_bound(const GFunctionSpec& spec, const HermiteSlice& slice, const TensorGrid& grid);

// Empirical pointwise ratios: max_x g_k / g_{k+1} and max_x g_{k+1}(m(H) f) / g*_k(f).
struct GPointwiseRatios {
  double ladder = 0.0;
  double multiplier = 0.0;
};

GPointwiseRatios g_pointwise_ratios(int k, const HermiteSlice& slice, const ScalarSymbol& m, const TensorGrid& grid);

struct GEquivalenceReport {
  double p = 2.0;
  std::vector<double> lambdas;
  std::vector<double> c1;  // per lambda: min over the family of ||g_1 f||_p / ||f||_p
  std::vector<double> c2;  // per lambda: max
  double spread = 0.0;     // max over C1, C2 of (max - min)/max across lambda
  bool lambda_stable = false;
  std::size_t excluded_zero = 0;
};

// Each family member is re-instantiated with the same coefficients at every
// lambda (all members' own lambda values when `lambdas` is empty) and measured
// on default_g_star_grid(n, K, lambda). Throws DataError for an empty family
// and CapabilityError unless 1 < p < inf.
GEquivalenceReport g_norm_equivalence_report(std::span<const HermiteSlice> family, double p,
                                             std::vector<double> lambdas = {});

}  // namespace grushin
