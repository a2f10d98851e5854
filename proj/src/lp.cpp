#include "grushin/lp.hpp"

#include <cmath>

#include "grushin/errors.hpp"

namespace grushin {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw CapabilityError("only exponents 1 < p < inf are supported");
}

namespace {

template <class T>
double weighted_norm(std::span<const T> values, const TensorGrid& grid, double p) {
  require_exponent(p);
  if (values.size() != grid.size()) throw DomainError("sample count does not match grid");
  const std::size_t N = grid.points_per_axis();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a == 0.0) continue;
    double w = 1.0;
    std::size_t rest = i;
    for (int d = 0; d < grid.n; ++d) {
      w *= grid.weights[rest % N];
      rest /= N;
    }
    s += w * (p == 2.0 ? a * a : std::pow(a, p));
  }
  return std::pow(s, 1.0 / p);
}

}  // namespace

double lp_norm(std::span<const cplx> values, const TensorGrid& grid, double p) { return weighted_norm(values, grid, p); }

double lp_norm(std::span<const double> values, const TensorGrid& grid, double p) { return weighted_norm(values, grid, p); }

double lp_norm(const GridFunction& f, double p) {
  require_exponent(p);
  double s = 0.0;
  for (const auto& v : f.values()) {
    const double a = std::abs(v);
    s += p == 2.0 ? a * a : std::pow(a, p);
  }
  return std::pow(s * f.spec().cell_volume() * f.spec().dt(), 1.0 / p);
}

}  // namespace grushin
