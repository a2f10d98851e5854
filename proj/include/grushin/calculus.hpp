#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "grushin/hermite.hpp"
#include "grushin/transform.hpp"

namespace grushin {

// A scalar function m on (0, inf). derivatives[k-1], when present, is m^{(k)};
// missing orders fall back to central finite differences.
struct ScalarSymbol {
  std::string name;
  std::function<cplx(double)> eval;
  std::vector<std::function<cplx(double)>> derivatives;
  int declared_order = 0;

  cplx operator()(double mu) const { return eval(mu); }
  bool has_analytic(int k) const { return k >= 1 && static_cast<std::size_t>(k) <= derivatives.size() && derivatives[k - 1]; }
  // m^{(k)}(mu), k >= 0.
  cplx derivative(int k, double mu) const;
};

ScalarSymbol symbol_one();
ScalarSymbol symbol_identity();
// e^{-s mu}
ScalarSymbol symbol_heat(double s);
// mu^s
ScalarSymbol symbol_power(double s);
// (1 - mu)_+^delta, with delta = 0 read as the indicator of mu < 1.
ScalarSymbol symbol_cesaro(double delta);
// mu^{i tau}
ScalarSymbol symbol_imaginary_power(double tau);
// (1 + mu)^{-1}
ScalarSymbol symbol_rational();

ScalarSymbol symbol_product(const ScalarSymbol& a, const ScalarSymbol& b);
ScalarSymbol symbol_sum(const ScalarSymbol& a, const ScalarSymbol& b);

// Parses "one", "heat:s", "power:s", "cesaro-delta:d", "imaginary-power:t",
// "rational" (also "rational:(1+mu)^{-1}"). Throws ConfigError otherwise.
ScalarSymbol parse_symbol(std::string_view text);

// Central 4th-order finite difference of order k with step mu * eps^{1/(k+2)}.
cplx finite_difference_derivative(const std::function<cplx(double)>& f, int k, double mu);

// c_alpha -> m((2|alpha|+n)|lambda|) c_alpha. Throws EvaluationError naming mu
// if m is not finite at an occurring spectral value.
HermiteSlice apply_scalar_multiplier(const ScalarSymbol& m, const HermiteSlice& s);
SpectralCoefficients apply_scalar_multiplier(const ScalarSymbol& m, const SpectralCoefficients& c);

// Diagonal factor mu^s.
HermiteSlice fractional_power_apply(double s, const HermiteSlice& slice);
SpectralCoefficients fractional_power_apply(double s, const SpectralCoefficients& c);

// Gamma(1/2)^{-1} int_0^inf t^{-1/2} e^{-t mu} dt by an exp-sinh rule; equals mu^{-1/2}.
double semigroup_inverse_sqrt(double mu, int nodes = 240);

struct HormanderReport {
  int order = 0;
  double mu_lo = 1.0;
  double mu_hi = 1e6;
  int samples = 0;
  // sup[k] = max over samples of |mu^k m^{(k)}(mu)|, k = 0..order; argmax[k] the sampled mu.
  std::vector<double> sup;
  std::vector<double> argmax;
  bool bounded = false;
};

inline constexpr double kHormanderThreshold = 1e12;

// Log-spaced sampling of mu^k |m^{(k)}(mu)| on [mu_lo, mu_hi]. Non-finite values
// count as unbounded. Throws DomainError for N < 1 or a bad range and
// EvaluationError if evaluating m or a derivative throws.
HormanderReport hormander_check(const ScalarSymbol& m, int N, double mu_lo = 1.0, double mu_hi = 1e6, int samples = 400);

}  // namespace grushin
