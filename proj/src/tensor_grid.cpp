#include "grushin/tensor_grid.hpp"

#include <cmath>

#include "grushin/errors.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

std::size_t TensorGrid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= nodes.size();
  return s;
}

void TensorGrid::point(std::size_t i, std::span<double> out) const {
  const std::size_t N = nodes.size();
  for (int a = 0; a < n; ++a) {
    out[static_cast<std::size_t>(a)] = nodes[i % N];
    i /= N;
  }
}

double TensorGrid::weight(std::size_t i) const {
  const std::size_t N = nodes.size();
  double w = 1.0;
  for (int a = 0; a < n; ++a) {
    w *= weights[i % N];
    i /= N;
  }
  return w;
}

std::vector<double> TensorGrid::all_weights() const {
  std::vector<double> w(size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weight(i);
  return w;
}

TensorGrid uniform_grid(int n, int N, double half_width) {
  if (n < 1 || n > kMaxDim) throw DomainError("spatial dimension must lie in [1, 3]");
  if (N < 2) throw DomainError("uniform grid needs at least two points per axis");
  if (!(half_width > 0.0)) throw DomainError("grid half-width must be positive");
  TensorGrid g;
  g.n = n;
  const double h = 2.0 * half_width / N;
  g.nodes.resize(static_cast<std::size_t>(N));
  g.weights.assign(static_cast<std::size_t>(N), h);
  for (int i = 0; i < N; ++i) g.nodes[static_cast<std::size_t>(i)] = -half_width + i * h;
  return g;
}

TensorGrid gauss_hermite_grid(int n, int Q, double lambda) {
  if (n < 1 || n > kMaxDim) throw DomainError("spatial dimension must lie in [1, 3]");
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("frequency lambda must be finite and nonzero");
  const QuadratureRule rule = gauss_hermite_rule(Q);
  const double scale = 1.0 / std::sqrt(std::abs(lambda));
  TensorGrid g;
  g.n = n;
  g.nodes.resize(rule.nodes.size());
  g.weights.resize(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    g.nodes[i] = rule.nodes[i] * scale;
    g.weights[i] = rule.function_weights[i] * scale;
  }
  return g;
}

std::vector<cplx> contract_all_axes(std::span<const cplx> in, int n, const AxisMatrix& m) {
  const std::size_t in_len = m.cols;
  const std::size_t out_len = m.rows;
  // Shape is tracked per axis; axis a is contracted in place of position a.
  std::vector<std::size_t> shape(static_cast<std::size_t>(n), in_len);
  std::vector<cplx> cur(in.begin(), in.end());
  for (int a = 0; a < n; ++a) {
    std::size_t inner = 1;
    for (int b = 0; b < a; ++b) inner *= shape[static_cast<std::size_t>(b)];
    std::size_t outer = 1;
    for (int b = a + 1; b < n; ++b) outer *= shape[static_cast<std::size_t>(b)];
    std::vector<cplx> next(inner * out_len * outer, cplx{});
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t k = 0; k < in_len; ++k) {
        const cplx* src = cur.data() + (o * in_len + k) * inner;
        for (std::size_t r = 0; r < out_len; ++r) {
          const double coef = m.data[r * in_len + k];
          if (coef == 0.0) continue;
          cplx* dst = next.data() + (o * out_len + r) * inner;
          for (std::size_t i = 0; i < inner; ++i) dst[i] += coef * src[i];
        }
      }
    }
    shape[static_cast<std::size_t>(a)] = out_len;
    cur.swap(next);
  }
  return cur;
}

}  // namespace grushin
