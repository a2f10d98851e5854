#pragma once

#include <functional>
#include <span>
#include <vector>

#include "grushin/hermite.hpp"
#include "grushin/multi_index.hpp"
#include "grushin/tensor_grid.hpp"

namespace grushin {

// Sampling geometry on [-L, L)^n x [0, T): x_i = -L + i (2L/Nx), t_k = k (T/Nt).
// Frequencies lambda_m = 2 pi m / T for m in {-Nt/2, ..., -1, 1, ..., Nt/2 - 1}.
struct GridSpec {
  int n = 1;
  int Nx = 64;
  double x_extent = 8.0;
  int Nt = 64;
  double t_extent = 6.283185307179586;

  // Throws DomainError unless n in [1,3], Nx and Nt powers of two >= 8, extents positive.
  void validate() const;

  double dx() const { return 2.0 * x_extent / Nx; }
  double dt() const { return t_extent / Nt; }
  std::size_t spatial_size() const;
  std::size_t size() const { return spatial_size() * static_cast<std::size_t>(Nt); }
  double cell_volume() const;

  double lambda_min() const;
  double frequency(int m) const;
  std::vector<int> frequency_indices() const;

  // Box adequacy: L >= sqrt(2K+1) / sqrt(lambda_min), so the degree-K mode at
  // the smallest |lambda| has decayed inside the box.
  bool resolves(int K) const;

  TensorGrid spatial_grid() const;
  // Same box and period, twice the points on both axes.
  GridSpec refined() const;

  bool operator==(const GridSpec&) const = default;
};

// Samples of f(x, t); spatial index fastest (axis 1 fastest), time slowest.
class GridFunction {
 public:
  explicit GridFunction(GridSpec spec);
  // Throws DomainError on a shape mismatch and DataError on non-finite values.
  GridFunction(GridSpec spec, std::vector<cplx> values);

  const GridSpec& spec() const { return spec_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx& at(std::size_t spatial, int k) { return values_[spatial + spec_.spatial_size() * static_cast<std::size_t>(k)]; }
  const cplx& at(std::size_t spatial, int k) const {
    return values_[spatial + spec_.spatial_size() * static_cast<std::size_t>(k)];
  }

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

// c_alpha(lambda_m) = (f^{lambda_m}, Phi_alpha^{lambda_m}), f^lambda(x) = int_0^T f(x,t) e^{i lambda t} dt.
// Inversion: f(x,t) = (2 pi)^{-1} sum_m (2 pi / T) e^{-i lambda_m t} sum_alpha c_alpha(lambda_m) Phi_alpha^{lambda_m}(x).
// All slices share one truncation K.
class SpectralCoefficients {
 public:
  SpectralCoefficients(GridSpec spec, int K);
  // Slices must follow frequency_indices() order with matching lambdas; they are
  // padded to their largest truncation.
  SpectralCoefficients(GridSpec spec, std::vector<HermiteSlice> slices, double dropped_energy = 0.0);

  const GridSpec& spec() const { return spec_; }
  int truncation() const { return K_; }
  int dim() const { return spec_.n; }

  std::size_t slice_count() const { return slices_.size(); }
  std::span<const HermiteSlice> slices() const { return slices_; }
  std::span<HermiteSlice> slices() { return slices_; }
  int frequency_index(std::size_t i) const { return frequencies_[i]; }
  const HermiteSlice& slice(int m) const;
  HermiteSlice& slice(int m);

  // Energy ||T^{-1} int f dt||_2^2 of the excluded lambda = 0 bin.
  double dropped_energy() const { return dropped_energy_; }
  void set_dropped_energy(double e) { dropped_energy_ = e; }

  // (2 pi)^{-1} sum_m Delta lambda sum_alpha |c_alpha(lambda_m)|^2.
  double parseval_energy() const;
  // Largest per-slice fraction of mass at degree K.
  double truncation_indicator() const;

 private:
  GridSpec spec_;
  int K_;
  std::vector<int> frequencies_;
  std::vector<HermiteSlice> slices_;
  double dropped_energy_ = 0.0;
};

// Applies a per-slice map (possibly changing truncation) in parallel over slices.
SpectralCoefficients map_slices(const SpectralCoefficients& c, const std::function<HermiteSlice(const HermiteSlice&)>& fn);

// Throws CapabilityError when spec.resolves(K) is false and DataError on non-finite input.
SpectralCoefficients forward_transform(const GridFunction& f, int K);
GridFunction inverse_transform(const SpectralCoefficients& c);

// Multiplies c_alpha(lambda) by (2|alpha| + n)|lambda|.
SpectralCoefficients apply_grushin(const SpectralCoefficients& c);

// periodic: t is read modulo T, so a slice at lambda_m lands on r^2 lambda_m and
// the map commutes exactly with spectral multipliers when r^2 m is an integer.
// window: [0, T) is a window on the real line and r^2 t >= T reads as zero; this
// is the dilation of R^{n+1}, with ||D_r f||^2 = r^{n+2} ||f||^2 for data
// supported inside the window.
enum class TimeExtension { periodic, window };

struct DilationParams {
  double r = 1.0;
  TimeExtension time = TimeExtension::periodic;
};

// D_r f(x,t) = r^{n+2} f(r x, r^2 t), resampled by trigonometric interpolation
// in t and in each spatial axis; points mapped outside the box read as zero.
// Throws DomainError for r <= 0.
GridFunction nonisotropic_dilate(const GridFunction& f, DilationParams d);

}  // namespace grushin
