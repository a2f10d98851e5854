#pragma once

#include <span>

#include "grushin/tensor_grid.hpp"
#include "grushin/transform.hpp"

namespace grushin {

// Discrete L^p norms (sum |f|^p dvol)^{1/p} for 1 < p < inf; other exponents
// throw CapabilityError.
double lp_norm(std::span<const cplx> values, const TensorGrid& grid, double p);
double lp_norm(std::span<const double> values, const TensorGrid& grid, double p);
// Space-time norm with cell volume dx^n dt.
double lp_norm(const GridFunction& f, double p);

void require_exponent(double p);

}  // namespace grushin
