#include "grushin/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

namespace {

bool power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Row index of frequency m in an unshifted length-Nt DFT.
std::size_t dft_row(int m, int Nt) { return static_cast<std::size_t>(m < 0 ? m + Nt : m); }

// Periodic trigonometric interpolant kernel for N samples, evaluated at offset
// u (in samples). The Nyquist term is taken as a cosine so real data stay real.
double dirichlet(double u, int N) {
  double s = 1.0 + std::cos(std::numbers::pi * u);
  for (int j = 1; j < N / 2; ++j) s += 2.0 * std::cos(2.0 * std::numbers::pi * j * u / N);
  return s / N;
}

// Row i interpolates the periodic sequence at position pos[i] (in samples);
// rows with pos[i] < 0 are zero.
AxisMatrix interpolation_matrix(std::span<const double> pos, int N) {
  AxisMatrix m;
  m.rows = pos.size();
  m.cols = static_cast<std::size_t>(N);
  m.data.assign(m.rows * m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (pos[i] < 0.0) continue;
    const double nearest = std::round(pos[i]);
    if (std::abs(pos[i] - nearest) < 1e-12) {
      m.data[i * m.cols + static_cast<std::size_t>(static_cast<long>(nearest) % N)] = 1.0;
      continue;
    }
    for (int k = 0; k < N; ++k) m.data[i * m.cols + static_cast<std::size_t>(k)] = dirichlet(pos[i] - k, N);
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridSpec

void GridSpec::validate() const {
  if (n < 1 || n > kMaxDim) throw DomainError("spatial dimension must lie in [1, 3]");
  if (!power_of_two(Nx) || Nx < 8) throw DomainError("Nx must be a power of two >= 8");
  if (!power_of_two(Nt) || Nt < 8) throw DomainError("Nt must be a power of two >= 8");
  if (!(x_extent > 0.0) || !std::isfinite(x_extent)) throw DomainError("x_extent must be positive");
  if (!(t_extent > 0.0) || !std::isfinite(t_extent)) throw DomainError("t_extent must be positive");
}

std::size_t GridSpec::spatial_size() const {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(Nx);
  return s;
}

double GridSpec::cell_volume() const { return std::pow(dx(), n); }

double GridSpec::lambda_min() const { return 2.0 * std::numbers::pi / t_extent; }

double GridSpec::frequency(int m) const { return 2.0 * std::numbers::pi * m / t_extent; }

std::vector<int> GridSpec::frequency_indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(Nt - 1));
  for (int m = -Nt / 2; m < Nt / 2; ++m)
    if (m != 0) out.push_back(m);
  return out;
}

bool GridSpec::resolves(int K) const { return x_extent >= std::sqrt(2.0 * K + 1.0) / std::sqrt(lambda_min()); }

TensorGrid GridSpec::spatial_grid() const { return uniform_grid(n, Nx, x_extent); }

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.Nx *= 2;
  g.Nt *= 2;
  return g;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(GridSpec spec) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.size(), cplx{});
}

GridFunction::GridFunction(GridSpec spec, std::vector<cplx> values) : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size()) throw DomainError("grid function has the wrong number of samples");
  if (!std::all_of(values_.begin(), values_.end(), finite)) throw DataError("grid function has non-finite samples");
}

// ---------------------------------------------------------------------------
// SpectralCoefficients

SpectralCoefficients::SpectralCoefficients(GridSpec spec, int K) : spec_(spec), K_(K) {
  spec_.validate();
  if (K < 0) throw DomainError("truncation K must be non-negative");
  frequencies_ = spec_.frequency_indices();
  slices_.reserve(frequencies_.size());
  for (int m : frequencies_) slices_.emplace_back(spec_.n, K, spec_.frequency(m));
}

SpectralCoefficients::SpectralCoefficients(GridSpec spec, std::vector<HermiteSlice> slices, double dropped_energy)
    : spec_(spec), K_(0), dropped_energy_(dropped_energy) {
  spec_.validate();
  frequencies_ = spec_.frequency_indices();
  if (slices.size() != frequencies_.size()) throw DomainError("slice count does not match the frequency grid");
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const double expected = spec_.frequency(frequencies_[i]);
    if (slices[i].dim() != spec_.n) throw DomainError("slice dimension does not match the grid");
    if (std::abs(slices[i].lambda() - expected) > 1e-12 * std::abs(expected))
      throw DomainError("slice frequency does not match its grid index");
    K_ = std::max(K_, slices[i].truncation());
  }
  slices_.reserve(slices.size());
  for (auto& s : slices) slices_.push_back(s.truncation() == K_ ? std::move(s) : s.with_truncation(K_));
}

const HermiteSlice& SpectralCoefficients::slice(int m) const {
  const int Nt = spec_.Nt;
  if (m == 0 || m < -Nt / 2 || m >= Nt / 2) throw DomainError("frequency index outside the grid or equal to 0");
  return slices_[static_cast<std::size_t>(m < 0 ? m + Nt / 2 : m + Nt / 2 - 1)];
}

HermiteSlice& SpectralCoefficients::slice(int m) {
  return const_cast<HermiteSlice&>(static_cast<const SpectralCoefficients&>(*this).slice(m));
}

double SpectralCoefficients::parseval_energy() const {
  double s = 0.0;
  for (const auto& sl : slices_) s += sl.norm_squared();
  return s / spec_.t_extent;
}

double SpectralCoefficients::truncation_indicator() const {
  double worst = 0.0;
  for (const auto& sl : slices_) worst = std::max(worst, sl.truncation_indicator());
  return worst;
}

SpectralCoefficients map_slices(const SpectralCoefficients& c, const std::function<HermiteSlice(const HermiteSlice&)>& fn) {
  const auto in = c.slices();
  std::vector<HermiteSlice> out(in.size(), HermiteSlice(c.dim(), 0, in.empty() ? 1.0 : in[0].lambda()));
  parallel_for(in.size(), [&](std::size_t i) { out[i] = fn(in[i]); });
  return SpectralCoefficients(c.spec(), std::move(out), c.dropped_energy());
}

// ---------------------------------------------------------------------------
// Transforms

SpectralCoefficients forward_transform(const GridFunction& f, int K) {
  const GridSpec& spec = f.spec();
  if (K < 0) throw DomainError("truncation K must be non-negative");
  if (!spec.resolves(K))
    throw CapabilityError("grid box too small for truncation K: need x_extent >= sqrt(2K+1)/sqrt(lambda_min)");
  const std::size_t S = spec.spatial_size();
  std::vector<cplx> buf(f.values().begin(), f.values().end());
  if (!std::all_of(buf.begin(), buf.end(), finite)) throw DataError("non-finite input to forward transform");

  double dropped = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    cplx mean{};
    for (int k = 0; k < spec.Nt; ++k) mean += buf[s + S * static_cast<std::size_t>(k)];
    dropped += std::norm(mean / static_cast<double>(spec.Nt));
  }
  dropped *= spec.cell_volume();

  detail::strided_dft(buf, S, spec.Nt, +1);
  const double dt = spec.dt();
  for (auto& v : buf) v *= dt;

  const TensorGrid grid = spec.spatial_grid();
  const std::vector<int> ms = spec.frequency_indices();
  std::vector<HermiteSlice> slices(ms.size(), HermiteSlice(spec.n, 0, 1.0));
  parallel_for(ms.size(), [&](std::size_t i) {
    const std::span<const cplx> row(buf.data() + S * dft_row(ms[i], spec.Nt), S);
    slices[i] = analyze_on_grid(row, grid, spec.frequency(ms[i]), K);
  });
  return SpectralCoefficients(spec, std::move(slices), dropped);
}

GridFunction inverse_transform(const SpectralCoefficients& c) {
  const GridSpec& spec = c.spec();
  const std::size_t S = spec.spatial_size();
  const TensorGrid grid = spec.spatial_grid();
  std::vector<cplx> buf(spec.size(), cplx{});
  parallel_for(c.slice_count(), [&](std::size_t i) {
    const std::vector<cplx> v = synthesize_on_grid(c.slices()[i], grid);
    std::copy(v.begin(), v.end(), buf.begin() + static_cast<std::ptrdiff_t>(S * dft_row(c.frequency_index(i), spec.Nt)));
  });
  detail::strided_dft(buf, S, spec.Nt, -1);
  const double scale = 1.0 / spec.t_extent;
  for (auto& v : buf) v *= scale;
  return GridFunction(spec, std::move(buf));
}

SpectralCoefficients apply_grushin(const SpectralCoefficients& c) {
  return map_slices(c, [](const HermiteSlice& s) {
    HermiteSlice out = s;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s.spectral_value(i);
    return out;
  });
}

// ---------------------------------------------------------------------------
// Dilation

GridFunction nonisotropic_dilate(const GridFunction& f, DilationParams d) {
  if (!(d.r > 0.0) || !std::isfinite(d.r)) throw DomainError("dilation scale r must be positive");
  const GridSpec& spec = f.spec();
  if (d.r == 1.0) return f;
  const std::size_t S = spec.spatial_size();
  const auto Nt = static_cast<std::size_t>(spec.Nt);

  // Time: source position r^2 t_k in samples.
  std::vector<double> tpos(Nt);
  const double r2 = d.r * d.r;
  for (std::size_t k = 0; k < Nt; ++k) {
    double p = r2 * static_cast<double>(k);
    if (d.time == TimeExtension::periodic)
      p = std::fmod(p, static_cast<double>(Nt));
    else if (p > static_cast<double>(Nt) - 1.0 + 1e-12)
      p = -1.0;
    tpos[k] = p;
  }
  const AxisMatrix mt = interpolation_matrix(tpos, spec.Nt);

  std::vector<cplx> tmp(spec.size(), cplx{});
  parallel_for(Nt, [&](std::size_t k) {
    cplx* out = tmp.data() + S * k;
    for (std::size_t q = 0; q < Nt; ++q) {
      const double w = mt(k, q);
      if (w == 0.0) continue;
      const cplx* in = f.values().data() + S * q;
      for (std::size_t s = 0; s < S; ++s) out[s] += w * in[s];
    }
  });

  // Space: source position (r x_i + L)/dx in samples, zero outside [-L, L).
  const double h = spec.dx();
  const double L = spec.x_extent;
  std::vector<double> xpos(static_cast<std::size_t>(spec.Nx));
  for (int i = 0; i < spec.Nx; ++i) {
    const double x = d.r * (-L + i * h);
    const double p = (x + L) / h;
    xpos[static_cast<std::size_t>(i)] = (p < -1e-12 || p > spec.Nx - 1.0 + 1e-12) ? -1.0 : std::max(p, 0.0);
  }
  const AxisMatrix mx = interpolation_matrix(xpos, spec.Nx);

  const double amp = std::pow(d.r, spec.n + 2);
  std::vector<cplx> out(spec.size());
  parallel_for(Nt, [&](std::size_t k) {
    const std::vector<cplx> block = contract_all_axes(std::span<const cplx>(tmp.data() + S * k, S), spec.n, mx);
    for (std::size_t s = 0; s < S; ++s) out[S * k + s] = amp * block[s];
  });
  return GridFunction(spec, std::move(out));
}

}  // namespace grushin
