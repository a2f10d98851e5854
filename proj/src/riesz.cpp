#include "grushin/riesz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

namespace {

void require_axis(int j, int n) {
  if (j < 1 || j > n) throw DomainError("axis index j must lie in [1, n]");
}

// Moves every coefficient by `shift` (per axis) with a per-mode factor.
// Coefficients whose target leaves N^n are dropped.
template <class Factor>
HermiteSlice shift_modes(const HermiteSlice& in, std::span<const int> shift, int out_K, Factor&& factor) {
  const int n = in.dim();
  HermiteSlice out(n, out_K, in.lambda());
  const auto& src = in.layout();
  const auto& dst = out.layout();
  std::array<int, kMaxDim> target{};
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == cplx{}) continue;
    const auto& alpha = src.at(i);
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      target[static_cast<std::size_t>(a)] = alpha[a] + shift[static_cast<std::size_t>(a)];
      if (target[static_cast<std::size_t>(a)] < 0) inside = false;
    }
    if (!inside) continue;
    const long pos = dst.index_of(std::span<const int>(target.data(), static_cast<std::size_t>(n)));
    if (pos < 0) continue;
    out[static_cast<std::size_t>(pos)] += factor(alpha) * in[i];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// First-order Riesz transforms

HermiteSlice riesz_apply(const RieszSpec& spec, const HermiteSlice& slice) {
  const int n = slice.dim();
  require_axis(spec.j, n);
  const bool positive = slice.lambda() > 0.0;
  // plain raises for lambda > 0, star raises for lambda < 0.
  const bool raises = (spec.kind == RieszKind::plain) == positive;
  const double sign = positive ? 1.0 : -1.0;
  std::array<int, kMaxDim> shift{};
  shift[static_cast<std::size_t>(spec.j - 1)] = raises ? 1 : -1;
  const int K = slice.truncation();
  const int axis = spec.j - 1;
  return shift_modes(slice, std::span<const int>(shift.data(), static_cast<std::size_t>(n)), raises ? K + 1 : std::max(K - 1, 0),
                     [&](const MultiIndex& alpha) {
                       const double num = 2.0 * (raises ? alpha[axis] + 1 : alpha[axis]);
                       const double den = 2.0 * alpha.degree() + n;
                       return sign * std::sqrt(num / den);
                     });
}

SpectralCoefficients riesz_apply(const RieszSpec& spec, const SpectralCoefficients& c) {
  require_axis(spec.j, c.dim());
  return map_slices(c, [&spec](const HermiteSlice& s) { return riesz_apply(spec, s); });
}

// ---------------------------------------------------------------------------
// Higher order

HermiteSlice higher_riesz_apply(const HigherRieszSpec& spec, const HermiteSlice& slice) {
  const int n = slice.dim();
  if (spec.p < 0 || spec.q < 0 || spec.p + spec.q < 1) throw DomainError("higher Riesz order needs p, q >= 0 and p + q >= 1");
  if (spec.q >= 1 && n < 2) throw DomainError("higher Riesz transforms with q >= 1 need n >= 2");
  const bool positive = slice.lambda() > 0.0;
  // lambda > 0: A_1^* lowers alpha_1 and A_2 raises alpha_2; lambda < 0 swaps both, each step with a factor -1.
  const int d1 = positive ? -spec.p : spec.p;
  const int d2 = positive ? spec.q : -spec.q;
  const double sign = positive || (spec.p + spec.q) % 2 == 0 ? 1.0 : -1.0;
  std::array<int, kMaxDim> shift{};
  shift[0] = d1;
  if (n >= 2) shift[1] = d2;
  const int out_K = std::max(slice.truncation() + d1 + (n >= 2 ? d2 : 0), 0);
  return shift_modes(slice, std::span<const int>(shift.data(), static_cast<std::size_t>(n)), out_K, [&](const MultiIndex& alpha) {
    double num = 1.0;
    double den = 1.0;
    const double mu = 2.0 * alpha.degree() + n;
    // Each ladder step contributes sqrt(2 * index |lambda|), H^{-1/2} contributes (mu |lambda|)^{-1/2}.
    for (int i = 0; i < spec.p; ++i) {
      num *= 2.0 * (positive ? alpha[0] - i : alpha[0] + 1 + i);
      den *= mu;
    }
    for (int i = 0; i < spec.q; ++i) {
      num *= 2.0 * (positive ? alpha[1] + 1 + i : alpha[1] - i);
      den *= mu;
    }
    return sign * std::sqrt(num / den);
  });
}

SpectralCoefficients higher_riesz_apply(const HigherRieszSpec& spec, const SpectralCoefficients& c) {
  return map_slices(c, [&spec](const HermiteSlice& s) { return higher_riesz_apply(spec, s); });
}

// ---------------------------------------------------------------------------
// Shifted powers

HermiteSlice shifted_power_apply(double a, double beta, const HermiteSlice& slice) {
  HermiteSlice out = slice;
  const double lam = std::abs(slice.lambda());
  const std::size_t K1 = static_cast<std::size_t>(slice.truncation()) + 1;
  std::vector<double> factor(K1);
  for (std::size_t k = 0; k < K1; ++k) {
    const double v = (2.0 * static_cast<double>(k) + slice.dim()) * lam + a * lam;
    if (!(v > 0.0)) throw DomainError("shifted spectral value must be positive");
    factor[k] = std::pow(v, -beta);
  }
  const auto& layout = slice.layout();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor[static_cast<std::size_t>(layout.degree(i))];
  return out;
}

SpectralCoefficients shifted_power_apply(double a, double beta, const SpectralCoefficients& c) {
  return map_slices(c, [a, beta](const HermiteSlice& s) { return shifted_power_apply(a, beta, s); });
}

// ---------------------------------------------------------------------------
// Kernels

double riesz_heat_integrand(int j, double lambda, double t, std::span<const double> x, std::span<const double> y) {
  const int n = static_cast<int>(x.size());
  require_axis(j, n);
  if (y.size() != x.size()) throw DomainError("kernel points must have equal dimension");
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("frequency lambda must be finite and nonzero");
  if (!(t > 0.0)) throw DomainError("heat time t must be positive");
  const double a = std::abs(lambda);
  const double r = std::sqrt(a);
  const double s = a * t;
  double plus2 = 0.0, minus2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r * x[static_cast<std::size_t>(i)], v = r * y[static_cast<std::size_t>(i)];
    plus2 += (u + v) * (u + v);
    minus2 += (u - v) * (u - v);
  }
  const auto ja = static_cast<std::size_t>(j - 1);
  const double u = r * x[ja], v = r * y[ja];
  double h, grad;  // h_s(u, v) and -d_{u_j} log h_s
  if (s > kMehlerLargeTime) {
    // One-term form e^{-n s} Phi_0(u) Phi_0(v); relative corrections are below e^{-2s}.
    h = std::exp(-n * s - 0.5 * (plus2 + minus2) / 2.0) * std::pow(std::numbers::pi, -0.5 * n);
    grad = u;
  } else {
    const double th = std::tanh(s), cth = 1.0 / th;
    h = std::pow(2.0 * std::numbers::pi * std::sinh(2.0 * s), -0.5 * n) * std::exp(-0.25 * (plus2 * th + minus2 * cth));
    grad = 0.5 * ((u + v) * th + (u - v) * cth);
  }
  const double amp = std::pow(a, 0.5 * (n + 1));
  // (-d_u + u) h = h (grad + u); (d_u + u) h = h (u - grad).
  return lambda > 0.0 ? amp * h * (grad + u) : -amp * h * (u - grad);
}

double riesz_kernel_eval(int j, double lambda, std::span<const double> x, std::span<const double> y, int nodes) {
  const int n = static_cast<int>(x.size());
  require_axis(j, n);
  if (y.size() != x.size()) throw DomainError("kernel points must have equal dimension");
  if (std::equal(x.begin(), x.end(), y.begin())) throw DomainError("Riesz kernel is not defined on the diagonal x = y");
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("frequency lambda must be finite and nonzero");
  const double a = std::abs(lambda);
  const double b = kMehlerLargeTime / a;
  const LineRule rule = tanh_sinh_rule(b, nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    sum += rule.weights[i] * riesz_heat_integrand(j, lambda, t, x, y) / std::sqrt(t);
  }
  sum /= std::sqrt(std::numbers::pi);
  if (lambda > 0.0) {
    // t > b: A_j e^{-n a t} Phi_0 Phi_0 = e^{-n a t} sqrt(2a) Phi_{e_j}(x) Phi_0(y).
    const MultiIndex zero = MultiIndex::zero(n);
    const double phi = std::sqrt(2.0 * a) * hermite_eval(MultiIndex::unit(n, j), a, x) * hermite_eval(zero, a, y);
    sum += std::erfc(std::sqrt(n * a * b)) / std::sqrt(n * a) * phi;
  }
  return sum;
}

CZProfile cz_profile(int j, double lambda, const TensorGrid& grid, int nodes) {
  const int n = grid.n;
  require_axis(j, n);
  const std::size_t N = grid.size();
  std::vector<CZProfile> rows(N);
  parallel_for(N, [&](std::size_t ix) {
    std::array<double, kMaxDim> x{}, y{};
    const std::span<double> xs(x.data(), static_cast<std::size_t>(n)), ys(y.data(), static_cast<std::size_t>(n));
    grid.point(ix, xs);
    CZProfile best;
    for (std::size_t iy = 0; iy < N; ++iy) {
      if (iy == ix) continue;
      grid.point(iy, ys);
      double d2 = 0.0;
      for (int a = 0; a < n; ++a) d2 += (x[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)]) * (x[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)]);
      const double v = std::pow(d2, 0.5 * n) * std::abs(riesz_kernel_eval(j, lambda, xs, ys, nodes));
      if (v > best.sup) {
        best.sup = v;
        best.arg_x = ix;
        best.arg_y = iy;
      }
    }
    rows[ix] = best;
  });
  CZProfile out;
  for (const auto& r : rows)
    if (r.sup > out.sup) out = r;
  out.nodes = nodes;
  return out;
}

CZRefinement cz_profile_refinement(int j, double lambda, const TensorGrid& grid, int nodes) {
  CZRefinement r;
  r.base = cz_profile(j, lambda, grid, nodes);
  r.refined = cz_profile(j, lambda, grid, 2 * nodes);
  r.relative_change = r.base.sup > 0.0 ? std::abs(r.refined.sup - r.base.sup) / r.base.sup : 0.0;
  return r;
}

}  // namespace grushin
