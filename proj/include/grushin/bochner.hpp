#pragma once

#include <span>
#include <vector>

#include "grushin/hermite.hpp"
#include "grushin/tensor_grid.hpp"
#include "grushin/transform.hpp"

namespace grushin {

struct RieszMeanSpec {
  double R = 1.0;
  double delta = 0.0;
};

// (1 - u)_+^delta; delta = 0 gives the indicator of u < 1 (u = 1 maps to 0).
double truncated_power(double u, double delta);

// Grushin means: c_alpha(lambda) -> (1 - (2|alpha|+n)|lambda|/R)_+^delta c_alpha(lambda).
HermiteSlice bochner_riesz_apply(const RieszMeanSpec& spec, const HermiteSlice& slice);
SpectralCoefficients bochner_riesz_apply(const RieszMeanSpec& spec, const SpectralCoefficients& c);

// Hermite means S_R^delta: degree-k block scaled by (1 - (2k+n)/R)_+^delta,
// independent of the slice frequency.
HermiteSlice hermite_bochner_riesz(const RieszMeanSpec& spec, const HermiteSlice& slice);

// g(x) -> g(sqrt(s) x) on coefficients: Phi_alpha^mu(sqrt(s) x) = s^{-n/4} Phi_alpha^{s mu}(x),
// so lambda -> s lambda and coefficients scale by s^{-n/4}.
HermiteSlice dilate_slice(const HermiteSlice& slice, double s);

struct MaximalProfile {
  std::vector<double> values;
  std::vector<double> radii_used;
};

// Centered maximal function over grid balls {y : |y - x| <= r} for the dyadic
// radii h 2^i, i = -1, 0, 1, ... up to the box diameter (i = -1 is the cell of x
// alone). Outside the box g is zero; averages divide by the lattice count of the
// ball. `grid` must be uniform. Throws DomainError for negative or non-finite g.
MaximalProfile hardy_littlewood_maximal(std::span<const double> g, const TensorGrid& grid);

// Index of the grid point nearest to -x (per axis i -> (N - i) mod N).
std::vector<std::size_t> reflection_indices(const TensorGrid& grid);

// Default threshold set: 33 log-spaced values per decade over [n|lambda|, (4K+n)|lambda|].
std::vector<double> default_r_set(int n, int K, double lambda, int per_decade = 33);

struct DominationReport {
  double delta = 0.0;
  double lambda = 0.0;
  std::size_t family_size = 0;
  std::vector<double> r_set;
  double c_emp = 0.0;          // max_x sup_R |S_R f| / (Mf(x) + Mf(-x)), max over the family
  double c_emp_refined = 0.0;  // same with the R-set density doubled
  double one_sided = 0.0;      // max_x sup_R |S_R f| / Mf(x)
  double relative_change = 0.0;
  bool stable = false;  // relative_change < 25%
  bool above_critical = false;  // delta > (n-1)/2 + 1/6
};

// Pointwise sup over R in r_set of |B_R^delta f| on the slice (spectral values
// (2k+n)|lambda|) against Mf(x) + Mf(-x), for every f in the family. An empty
// r_set selects default_r_set, and refinement doubles its density.
DominationReport maximal_domination_check(std::span<const HermiteSlice> family, double delta, const TensorGrid& grid,
                                          std::vector<double> r_set = {});

}  // namespace grushin
