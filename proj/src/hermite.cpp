#include "grushin/hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "grushin/errors.hpp"

namespace grushin {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

void require_lambda(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw DomainError("frequency lambda must be finite and nonzero (the lambda = 0 bin is excluded)");
}

}  // namespace

void hermite_functions(double u, std::span<double> out) {
  if (out.empty()) return;
  // Recurrence on e^{u^2/2} h_k with periodic rescaling, so h_k stays
  // representable where h_0 alone would underflow.
  const double gauss_log = -0.5 * u * u;
  double prev = 0.0;
  double cur = kPiQuarter;
  double log_scale = 0.0;
  double factor = std::exp(gauss_log);
  out[0] = cur * factor;
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double next = u * std::sqrt(2.0 / (kk + 1.0)) * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150.0 * std::numbers::ln10;
      factor = std::exp(log_scale + gauss_log);
    }
    out[k + 1] = cur * factor;
  }
}

std::vector<double> hermite_functions(double u, int kmax) {
  std::vector<double> h(static_cast<std::size_t>(kmax + 1));
  hermite_functions(u, h);
  return h;
}

void hermite_function_derivatives(double u, std::span<double> out) {
  if (out.empty()) return;
  std::vector<double> h(out.size() + 1);
  hermite_functions(u, h);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double down = k > 0 ? std::sqrt(kk / 2.0) * h[k - 1] : 0.0;
    out[k] = down - std::sqrt((kk + 1.0) / 2.0) * h[k + 1];
  }
}

double hermite_eval(const MultiIndex& alpha, double lambda, std::span<const double> x) {
  require_lambda(lambda);
  if (static_cast<int>(x.size()) != alpha.dim()) throw DomainError("point dimension does not match multi-index");
  const double a = std::abs(lambda);
  const double root = std::sqrt(a);
  const double amp = std::pow(a, 0.25);
  double value = 1.0;
  for (int axis = 0; axis < alpha.dim(); ++axis) {
    const auto h = hermite_functions(root * x[static_cast<std::size_t>(axis)], alpha[axis]);
    value *= amp * h.back();
  }
  return value;
}

// ---------------------------------------------------------------------------
// HermiteSlice

HermiteSlice::HermiteSlice(int n, int K, double lambda)
    : layout_(SimplexLayout::get(n, K)), lambda_(lambda), coeffs_(layout_->size(), cplx{}) {
  require_lambda(lambda);
}

HermiteSlice::HermiteSlice(int n, int K, double lambda, std::vector<cplx> coeffs)
    : layout_(SimplexLayout::get(n, K)), lambda_(lambda), coeffs_(std::move(coeffs)) {
  require_lambda(lambda);
  if (coeffs_.size() != layout_->size())
    throw DomainError("coefficient array does not cover the simplex |alpha| <= K");
}

HermiteSlice HermiteSlice::unit(int K, double lambda, const MultiIndex& alpha) {
  HermiteSlice s(alpha.dim(), K, lambda);
  s.set(alpha, 1.0);
  return s;
}

cplx HermiteSlice::coeff(const MultiIndex& alpha) const {
  const auto i = layout_->index_of(alpha);
  return i < 0 ? cplx{} : coeffs_[static_cast<std::size_t>(i)];
}

void HermiteSlice::set(const MultiIndex& alpha, cplx value) {
  const auto i = layout_->index_of(alpha);
  if (i < 0) throw DomainError("multi-index outside the truncation simplex");
  coeffs_[static_cast<std::size_t>(i)] = value;
}

double HermiteSlice::spectral_value(std::size_t i) const {
  return (2.0 * layout_->degree(i) + layout_->dim()) * std::abs(lambda_);
}

double HermiteSlice::norm_squared() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double HermiteSlice::truncation_indicator() const {
  const double total = norm_squared();
  if (total == 0.0) return 0.0;
  double top = 0.0;
  const int K = truncation();
  for (std::size_t i = layout_->degree_begin(K); i < layout_->degree_end(K); ++i) top += std::norm(coeffs_[i]);
  return top / total;
}

bool HermiteSlice::all_finite() const {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

HermiteSlice HermiteSlice::with_truncation(int K2) const {
  HermiteSlice out(dim(), K2, lambda_);
  const std::size_t keep = std::min(out.size(), size());
  // Graded layout: the degree <= min(K, K2) block is a common prefix.
  for (std::size_t i = 0; i < keep; ++i) out.coeffs_[i] = coeffs_[i];
  return out;
}

// ---------------------------------------------------------------------------
// Analysis and synthesis

AxisMatrix hermite_analysis_matrix(const TensorGrid& grid, double lambda, int K) {
  require_lambda(lambda);
  const double a = std::abs(lambda);
  const double root = std::sqrt(a);
  const double amp = std::pow(a, 0.25);
  const std::size_t N = grid.points_per_axis();
  AxisMatrix m;
  m.rows = static_cast<std::size_t>(K + 1);
  m.cols = N;
  m.data.assign(m.rows * m.cols, 0.0);
  std::vector<double> h(m.rows);
  for (std::size_t i = 0; i < N; ++i) {
    hermite_functions(root * grid.nodes[i], h);
    for (std::size_t k = 0; k < m.rows; ++k) m.data[k * N + i] = grid.weights[i] * amp * h[k];
  }
  return m;
}

AxisMatrix hermite_synthesis_matrix(const TensorGrid& grid, double lambda, int K) {
  require_lambda(lambda);
  const double a = std::abs(lambda);
  const double root = std::sqrt(a);
  const double amp = std::pow(a, 0.25);
  const std::size_t N = grid.points_per_axis();
  AxisMatrix m;
  m.rows = N;
  m.cols = static_cast<std::size_t>(K + 1);
  m.data.assign(m.rows * m.cols, 0.0);
  std::vector<double> h(m.cols);
  for (std::size_t i = 0; i < N; ++i) {
    hermite_functions(root * grid.nodes[i], h);
    for (std::size_t k = 0; k < m.cols; ++k) m.data[i * m.cols + k] = amp * h[k];
  }
  return m;
}

std::vector<cplx> synthesize_on_grid(const HermiteSlice& slice, const TensorGrid& grid) {
  if (grid.n != slice.dim()) throw DomainError("grid dimension does not match slice");
  const auto& layout = slice.layout();
  std::vector<cplx> dense(layout.dense_size(), cplx{});
  for (std::size_t i = 0; i < slice.size(); ++i) dense[layout.dense_offset(i)] = slice[i];
  const AxisMatrix m = hermite_synthesis_matrix(grid, slice.lambda(), slice.truncation());
  return contract_all_axes(dense, grid.n, m);
}

HermiteSlice analyze_on_grid(std::span<const cplx> values, const TensorGrid& grid, double lambda, int K) {
  if (values.size() != grid.size()) throw DomainError("sample count does not match grid");
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DataError("non-finite sample in Hermite analysis");
  }
  const AxisMatrix m = hermite_analysis_matrix(grid, lambda, K);
  const std::vector<cplx> dense = contract_all_axes(values, grid.n, m);
  HermiteSlice out(grid.n, K, lambda);
  const auto& layout = out.layout();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dense[layout.dense_offset(i)];
  return out;
}

HermiteSlice hermite_analyze(const SpatialFunction& f, int n, double lambda, int K) {
  require_lambda(lambda);
  const TensorGrid grid = gauss_hermite_grid(n, 2 * K + 2, lambda);
  std::vector<cplx> samples(grid.size());
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    grid.point(i, x);
    samples[i] = f(x);
  }
  return analyze_on_grid(samples, grid, lambda, K);
}

std::vector<cplx> hermite_synthesize(const HermiteSlice& slice, std::span<const double> points) {
  const int n = slice.dim();
  if (points.size() % static_cast<std::size_t>(n) != 0) throw DomainError("point array length is not a multiple of n");
  const std::size_t count = points.size() / static_cast<std::size_t>(n);
  const double a = std::abs(slice.lambda());
  const double root = std::sqrt(a);
  const double amp = std::pow(a, 0.25 * n);
  const int K = slice.truncation();
  const auto& layout = slice.layout();
  std::vector<cplx> out(count);
  std::vector<std::vector<double>> h(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(K + 1)));
  for (std::size_t p = 0; p < count; ++p) {
    for (int axis = 0; axis < n; ++axis)
      hermite_functions(root * points[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(axis)], h[static_cast<std::size_t>(axis)]);
    cplx sum{};
    for (std::size_t i = 0; i < layout.size(); ++i) {
      double basis = amp;
      const auto& alpha = layout.at(i);
      for (int axis = 0; axis < n; ++axis) basis *= h[static_cast<std::size_t>(axis)][static_cast<std::size_t>(alpha[axis])];
      sum += slice[i] * basis;
    }
    out[p] = sum;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ladder operators

HermiteSlice ladder_apply(const HermiteSlice& slice, int j, LadderKind kind) {
  const int n = slice.dim();
  if (j < 1 || j > n) throw DomainError("ladder axis j must satisfy 1 <= j <= n");
  const double lambda = slice.lambda();
  const double a = std::abs(lambda);
  const bool raises = ladder_raises(kind, lambda);
  const double sign = lambda > 0.0 ? 1.0 : -1.0;
  const int K = slice.truncation();
  const int K_out = raises ? K + 1 : std::max(K - 1, 0);

  HermiteSlice out(n, K_out, lambda);
  const auto& in_layout = slice.layout();
  const auto& out_layout = out.layout();
  std::vector<int> target(static_cast<std::size_t>(n));
  const auto axis = static_cast<std::size_t>(j - 1);
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const auto& alpha = in_layout.at(i);
    std::copy(alpha.entries().begin(), alpha.entries().end(), target.begin());
    double factor = 0.0;
    if (raises) {
      factor = std::sqrt(2.0 * (target[axis] + 1) * a);
      target[axis] += 1;
    } else {
      if (target[axis] == 0) continue;
      factor = std::sqrt(2.0 * target[axis] * a);
      target[axis] -= 1;
    }
    const auto dst = out_layout.index_of(target);
    if (dst < 0) continue;
    out[static_cast<std::size_t>(dst)] += sign * factor * slice[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mehler kernel

double mehler_kernel(double t, double lambda, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw DomainError("Mehler kernel requires t > 0");
  require_lambda(lambda);
  if (x.size() != y.size() || x.empty()) throw DomainError("Mehler kernel points must share a positive dimension");
  const double n = static_cast<double>(x.size());
  const double a = std::abs(lambda);
  const double s = a * t;
  if (s > kMehlerLargeTime) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += x[i] * x[i] + y[i] * y[i];
    // Phi_0^a(x) Phi_0^a(y) = (a/pi)^{n/2} e^{-a(|x|^2+|y|^2)/2}
    return std::exp(-n * s) * std::pow(a / std::numbers::pi, 0.5 * n) * std::exp(-0.5 * a * r2);
  }
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = x[i] + y[i];
    const double m = x[i] - y[i];
    plus += p * p;
    minus += m * m;
  }
  plus *= a;
  minus *= a;
  const double expo = -0.25 * (plus * std::tanh(s) + minus / std::tanh(s));
  return std::pow(a, 0.5 * n) * std::pow(2.0 * std::numbers::pi * std::sinh(2.0 * s), -0.5 * n) * std::exp(expo);
}

}  // namespace grushin
