#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "grushin/multi_index.hpp"
#include "grushin/tensor_grid.hpp"

namespace grushin {

// Normalization: Phi_alpha is the tensor product of the L^2-normalized
// Hermite functions h_k with positive leading coefficient,
//   h_0(u) = pi^{-1/4} e^{-u^2/2},
//   h_{k+1}(u) = u sqrt(2/(k+1)) h_k(u) - sqrt(k/(k+1)) h_{k-1}(u),
// and Phi_alpha^lambda(x) = |lambda|^{n/4} Phi_alpha(|lambda|^{1/2} x).

// h_0(u) .. h_{out.size()-1}(u) by the normalized recurrence.
void hermite_functions(double u, std::span<double> out);
std::vector<double> hermite_functions(double u, int kmax);

// h_k'(u) = sqrt(k/2) h_{k-1}(u) - sqrt((k+1)/2) h_{k+1}(u), for k = 0..out.size()-1.
void hermite_function_derivatives(double u, std::span<double> out);

// Phi_alpha^{|lambda|}(x). Throws DomainError for lambda == 0.
double hermite_eval(const MultiIndex& alpha, double lambda, std::span<const double> x);

// Coefficients of a function of x in the basis {Phi_alpha^lambda : |alpha| <= K}.
class HermiteSlice {
 public:
  HermiteSlice(int n, int K, double lambda);
  HermiteSlice(int n, int K, double lambda, std::vector<cplx> coeffs);

  static HermiteSlice unit(int K, double lambda, const MultiIndex& alpha);

  int dim() const { return layout_->dim(); }
  int truncation() const { return layout_->truncation(); }
  double lambda() const { return lambda_; }
  const SimplexLayout& layout() const { return *layout_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }

  // Zero when |alpha| > K.
  cplx coeff(const MultiIndex& alpha) const;
  void set(const MultiIndex& alpha, cplx value);

  // Eigenvalue (2|alpha| + n)|lambda| of position i.
  double spectral_value(std::size_t i) const;

  double norm_squared() const;
  // Fraction of coefficient mass sitting at degree K (0 for the zero slice).
  double truncation_indicator() const;
  bool all_finite() const;

  // Same function at truncation K2: zero padded, or cut when K2 < K.
  HermiteSlice with_truncation(int K2) const;

 private:
  std::shared_ptr<const SimplexLayout> layout_;
  double lambda_;
  std::vector<cplx> coeffs_;
};

// c_alpha = (f, Phi_alpha^lambda) by tensor Gauss-Hermite quadrature with
// 2K+2 nodes per axis, rescaled by |lambda|^{-1/2}. Exact for f in the span of
// {Phi_alpha^lambda : |alpha| <= K} up to round-off.
// Throws DomainError for lambda == 0 and DataError for non-finite samples.
using SpatialFunction = std::function<cplx(std::span<const double>)>;
HermiteSlice hermite_analyze(const SpatialFunction& f, int n, double lambda, int K);

// Pointwise truncated series sum_alpha c_alpha Phi_alpha^lambda(x);
// `points` holds npoints * n coordinates, point-major.
std::vector<cplx> hermite_synthesize(const HermiteSlice& slice, std::span<const double> points);

// Separable synthesis on a tensor grid and its quadrature adjoint.
std::vector<cplx> synthesize_on_grid(const HermiteSlice& slice, const TensorGrid& grid);
HermiteSlice analyze_on_grid(std::span<const cplx> values, const TensorGrid& grid, double lambda, int K);

// 1-d table Phi_k^lambda(nodes[i]) scaled by an optional per-node weight, as
// a (K+1) x N matrix (analysis) or N x (K+1) matrix (synthesis).
AxisMatrix hermite_analysis_matrix(const TensorGrid& grid, double lambda, int K);
AxisMatrix hermite_synthesis_matrix(const TensorGrid& grid, double lambda, int K);

// creation: A_j(lambda) = -d/dx_j + lambda x_j; annihilation: A_j(lambda)^* = d/dx_j + lambda x_j.
// For lambda > 0 creation raises alpha_j with factor sqrt(2(alpha_j+1)|lambda|)
// and annihilation lowers it with sqrt(2 alpha_j |lambda|). For lambda < 0,
// A_j(lambda) = -A_j(|lambda|)^* and A_j(lambda)^* = -A_j(|lambda|).
enum class LadderKind { creation, annihilation };

// Output truncation is K+1 when the action raises and max(K-1, 0) when it lowers.
// j is 1-based.
HermiteSlice ladder_apply(const HermiteSlice& slice, int j, LadderKind kind);

// Whether `kind` raises the j-th index at this lambda.
inline bool ladder_raises(LadderKind kind, double lambda) {
  return (kind == LadderKind::creation) == (lambda > 0.0);
}

// Kernel of e^{-t H(lambda)}:
//   h_t(x,y) = (2 pi sinh 2t)^{-n/2} exp(-(|x+y|^2 tanh t + |x-y|^2 coth t)/4)   at lambda = 1,
//   h_t^lambda(x,y) = |lambda|^{n/2} h_{|lambda| t}(|lambda|^{1/2} x, |lambda|^{1/2} y).
// For |lambda| t > 12 the one-term eigen-approximation e^{-n|lambda|t} Phi_0^lambda(x) Phi_0^lambda(y)
// is used. Throws DomainError for t <= 0 or lambda == 0.
double mehler_kernel(double t, double lambda, std::span<const double> x, std::span<const double> y);

inline constexpr double kMehlerLargeTime = 12.0;

}  // namespace grushin
