#pragma once

#include <span>

#include "grushin/hermite.hpp"
#include "grushin/tensor_grid.hpp"
#include "grushin/transform.hpp"

namespace grushin {

// plain: R_j = A_j H^{-1/2}; star: R_j^* = A_j^* H^{-1/2}.
enum class RieszKind { plain, star };

struct RieszSpec {
  int j = 1;  // 1-based axis
  RieszKind kind = RieszKind::plain;
};

// Per-mode factors are lambda-free:
//   lambda > 0: plain e_alpha -> sqrt(2(alpha_j+1)/(2|alpha|+n)) e_{alpha+e_j},
//               star  e_alpha -> sqrt(2 alpha_j/(2|alpha|+n)) e_{alpha-e_j};
//   lambda < 0: plain and star swap direction and pick up a factor -1.
HermiteSlice riesz_apply(const RieszSpec& spec, const HermiteSlice& slice);
SpectralCoefficients riesz_apply(const RieszSpec& spec, const SpectralCoefficients& c);

// A_2^q A_1^{*p} H^{-(p+q)/2}. Requires p, q >= 0, p + q >= 1, and n >= 2 when q >= 1.
struct HigherRieszSpec {
  int p = 1;
  int q = 0;
};

HermiteSlice higher_riesz_apply(const HigherRieszSpec& spec, const HermiteSlice& slice);
SpectralCoefficients higher_riesz_apply(const HigherRieszSpec& spec, const SpectralCoefficients& c);

// Diagonal factor ((2|alpha|+n)|lambda| + a|lambda|)^{-beta}. Throws DomainError if
// some shifted spectral value is not positive.
HermiteSlice shifted_power_apply(double a, double beta, const HermiteSlice& slice);
SpectralCoefficients shifted_power_apply(double a, double beta, const SpectralCoefficients& c);

// (A_j(lambda) h_t^lambda)(x, y) with A_j acting in x, from the closed Mehler form:
//   lambda > 0: A_j h_t^lambda = a^{(n+1)/2} [(-d_u + u) h_{a t}](sqrt(a) x, sqrt(a) y),
//   lambda < 0: A_j h_t^lambda = -a^{(n+1)/2} [(d_u + u) h_{a t}](sqrt(a) x, sqrt(a) y),  a = |lambda|.
double riesz_heat_integrand(int j, double lambda, double t, std::span<const double> x, std::span<const double> y);

inline constexpr int kRieszKernelNodes = 200;

// Kernel of R_j(lambda): Gamma(1/2)^{-1} int_0^inf t^{-1/2} (A_j(lambda) h_t^lambda)(x,y) dt.
// (0, 12/|lambda|] uses a tanh-sinh rule with `nodes` points; the remainder is the
// ground-state term in closed form. Throws DomainError for x == y or lambda == 0.
double riesz_kernel_eval(int j, double lambda, std::span<const double> x, std::span<const double> y,
                         int nodes = kRieszKernelNodes);

struct CZProfile {
  double sup = 0.0;  // max over distinct grid pairs of |x-y|^n |R_j(lambda)(x,y)|
  std::size_t arg_x = 0;
  std::size_t arg_y = 0;
  int nodes = 0;
};

CZProfile cz_profile(int j, double lambda, const TensorGrid& grid, int nodes = kRieszKernelNodes);

struct CZRefinement {
  CZProfile base;
  CZProfile refined;  // twice the t-nodes
  double relative_change = 0.0;
};

CZRefinement cz_profile_refinement(int j, double lambda, const TensorGrid& grid, int nodes = kRieszKernelNodes);

}  // namespace grushin
