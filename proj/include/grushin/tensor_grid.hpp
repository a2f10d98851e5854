#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grushin/multi_index.hpp"

namespace grushin {

// Tensor-product point set in R^n with identical 1-d nodes and weights on
// every axis. Point ordering: axis 1 varies fastest.
struct TensorGrid {
  int n = 1;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t points_per_axis() const { return nodes.size(); }
  std::size_t size() const;
  // Coordinates of point i written into out (size n).
  void point(std::size_t i, std::span<double> out) const;
  double weight(std::size_t i) const;
  std::vector<double> all_weights() const;
};

// x_i = -L + i h, h = 2L/N, i = 0..N-1, trapezoid weights h (periodic box).
TensorGrid uniform_grid(int n, int N, double half_width);

// Gauss-Hermite grid with Q nodes per axis rescaled by |lambda|^{-1/2};
// weights integrate functions carrying their own Gaussian decay.
TensorGrid gauss_hermite_grid(int n, int Q, double lambda);

// Row-major real matrix used for axis contractions.
struct AxisMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Contracts a dense n-d tensor whose axes all have length in_len with `m`
// along every axis: out[i_1..i_n] = sum_k prod_a m(i_a, k_a) in[k_1..k_n].
std::vector<cplx> contract_all_axes(std::span<const cplx> in, int n, const AxisMatrix& m);

}  // namespace grushin
