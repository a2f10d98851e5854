#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "grushin/errors.hpp"
#include "grushin/transform.hpp"

using namespace grushin;

namespace {

constexpr double kPi = std::numbers::pi;

struct Mode {
  int m;
  MultiIndex alpha;
  cplx a;
};

// Samples sum a e^{-i lambda_m t} Phi_alpha^{lambda_m}(x) pointwise, independently of the transform.
GridFunction sample_modes(const GridSpec& spec, const std::vector<Mode>& modes) {
  GridFunction f(spec);
  const TensorGrid g = spec.spatial_grid();
  std::vector<double> x(static_cast<std::size_t>(spec.n));
  for (std::size_t s = 0; s < spec.spatial_size(); ++s) {
    g.point(s, x);
    for (const auto& md : modes) {
      const double lam = spec.frequency(md.m);
      const double phi = hermite_eval(md.alpha, lam, x);
      for (int k = 0; k < spec.Nt; ++k) f.at(s, k) += md.a * phi * std::exp(cplx(0.0, -lam * k * spec.dt()));
    }
  }
  return f;
}

std::vector<Mode> random_modes(const GridSpec& spec, int max_degree, int max_m, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<Mode> modes;
  const auto& layout = *SimplexLayout::get(spec.n, max_degree);
  for (int m = -max_m; m <= max_m; ++m) {
    if (m == 0) continue;
    for (std::size_t i = 0; i < layout.size(); ++i) modes.push_back({m, layout.at(i), cplx(N(rng), N(rng))});
  }
  return modes;
}

double grid_norm2(const GridFunction& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return s * f.spec().cell_volume() * f.spec().dt();
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("grid spec validation and frequencies") {
  GridSpec g;
  CHECK_NOTHROW(g.validate());
  g.Nx = 48;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g.Nx = 64;
  g.Nt = 4;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g.Nt = 16;
  g.t_extent = 2 * kPi;
  CHECK(g.frequency(3) == doctest::Approx(3.0));
  const auto ms = g.frequency_indices();
  CHECK(ms.size() == 15);
  CHECK(ms.front() == -8);
  CHECK(ms.back() == 7);
  CHECK(std::find(ms.begin(), ms.end(), 0) == ms.end());
  // L = 8, lambda_min = 1: sqrt(2K+1) <= 8 iff K <= 31.
  CHECK(g.resolves(31));
  CHECK_FALSE(g.resolves(32));
}

TEST_CASE("forward transform of a single joint eigenmode") {
  GridSpec spec{1, 128, 8.0, 16, 1.0};
  const double lam1 = spec.frequency(1);
  GridFunction f(spec);
  const TensorGrid g = spec.spatial_grid();
  for (std::size_t s = 0; s < spec.spatial_size(); ++s) {
    const double x = g.nodes[s];
    const double phi = std::pow(lam1, 0.25) * std::pow(kPi, -0.25) * std::exp(-lam1 * x * x / 2);
    for (int k = 0; k < spec.Nt; ++k) f.at(s, k) = phi * std::exp(cplx(0.0, -lam1 * k * spec.dt()));
  }
  const auto c = forward_transform(f, 4);
  double off = 0.0;
  for (std::size_t i = 0; i < c.slice_count(); ++i) {
    for (std::size_t a = 0; a < c.slices()[i].size(); ++a) {
      const cplx v = c.slices()[i][a];
      if (c.frequency_index(i) == 1 && a == 0)
        CHECK(std::abs(v - 1.0) < 1e-10);
      else
        off = std::max(off, std::abs(v));
    }
  }
  CHECK(off < 1e-10);
  CHECK(c.slice(1).lambda() == doctest::Approx(lam1));

  const GridFunction back = inverse_transform(c);
  CHECK(max_diff(back.values(), f.values()) < 1e-10);
}

TEST_CASE("zero input and zero coefficients") {
  GridSpec spec{2, 16, 6.0, 8, 2 * kPi};
  const auto c = forward_transform(GridFunction(spec), 3);
  for (const auto& s : c.slices()) CHECK(s.norm_squared() == 0.0);
  CHECK(c.dropped_energy() == 0.0);
  const auto f = inverse_transform(SpectralCoefficients(spec, 3));
  for (const auto& v : f.values()) CHECK(v == cplx{});
}

TEST_CASE("band-limited round trip and Parseval") {
  std::mt19937_64 rng(11);
  struct Case {
    GridSpec spec;
    int K;
  };
  const Case cases[] = {{{1, 128, 12.0, 32, 4 * kPi}, 6}, {{2, 64, 10.0, 16, 4 * kPi}, 6}};
  for (const auto& cs : cases) {
    CAPTURE(cs.spec.n);
    const auto modes = random_modes(cs.spec, cs.K - 2, cs.spec.Nt / 4, rng);
    const GridFunction f = sample_modes(cs.spec, modes);
    const auto c = forward_transform(f, cs.K);

    // Coefficients against the sampled amplitudes: c = T a.
    double coeff_err = 0.0;
    for (const auto& md : modes)
      coeff_err = std::max(coeff_err, std::abs(c.slice(md.m).coeff(md.alpha) - cs.spec.t_extent * md.a));
    CHECK(coeff_err < 1e-8);

    const GridFunction g = inverse_transform(c);
    CHECK(max_diff(g.values(), f.values()) < 1e-8);

    const double lhs = grid_norm2(f);
    CHECK(std::abs(c.parseval_energy() - lhs) < 1e-6 * lhs);
    CHECK(c.dropped_energy() < 1e-20);
  }
}

TEST_CASE("conjugate symmetry for real data") {
  GridSpec spec{1, 64, 8.0, 32, 2 * kPi};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  GridFunction f(spec);
  const TensorGrid g = spec.spatial_grid();
  const double a = N(rng), b = N(rng);
  for (std::size_t s = 0; s < spec.spatial_size(); ++s) {
    const double x = g.nodes[s];
    for (int k = 0; k < spec.Nt; ++k) {
      const double t = k * spec.dt();
      f.at(s, k) = std::exp(-x * x / 2) * (a * std::cos(t) + b * std::sin(2 * t) * x + 0.3 * std::cos(3 * t + x));
    }
  }
  const auto c = forward_transform(f, 12);
  double worst = 0.0;
  for (int m = 1; m < spec.Nt / 2; ++m) {
    const auto& p = c.slice(m);
    const auto& q = c.slice(-m);
    for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(q[i] - std::conj(p[i])));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("dropped zero-frequency energy") {
  GridSpec spec{1, 64, 8.0, 16, 2 * kPi};
  GridFunction f(spec);
  const TensorGrid g = spec.spatial_grid();
  for (std::size_t s = 0; s < spec.spatial_size(); ++s) {
    const double x = g.nodes[s];
    for (int k = 0; k < spec.Nt; ++k) f.at(s, k) = std::exp(-x * x / 2) * (1.0 + std::cos(k * spec.dt()));
  }
  const auto c = forward_transform(f, 4);
  // ||(1/T) int f dt||^2 = int e^{-x^2} dx.
  CHECK(std::abs(c.dropped_energy() - std::sqrt(kPi)) < 1e-8);
  // Total energy splits into the nonzero frequencies plus T times the mean energy.
  CHECK(std::abs(c.parseval_energy() + spec.t_extent * c.dropped_energy() - grid_norm2(f)) < 1e-8);
}

TEST_CASE("apply_grushin: eigenvalue examples") {
  GridSpec spec{1, 64, 8.0, 16, 2 * kPi};
  SpectralCoefficients c(spec, 3);
  c.slice(1).set(MultiIndex({0}), 1.0);
  c.slice(-2).set(MultiIndex({3}), cplx(0.0, 1.0));
  const auto g = apply_grushin(c);
  CHECK(g.slice(1).coeff(MultiIndex({0})) == cplx(1.0));
  // (2*3 + 1) * 2 = 14.
  CHECK(std::abs(g.slice(-2).coeff(MultiIndex({3})) - cplx(0.0, 14.0)) < 1e-14);
  const auto z = apply_grushin(SpectralCoefficients(spec, 3));
  for (const auto& s : z.slices()) CHECK(s.norm_squared() == 0.0);
}

TEST_CASE("apply_grushin against second-order finite differences") {
  GridSpec spec{1, 512, 8.0, 128, 4 * kPi};
  std::mt19937_64 rng(3);
  const auto modes = random_modes(spec, 2, 1, rng);
  const GridFunction f = sample_modes(spec, modes);
  const GridFunction Gf = inverse_transform(apply_grushin(forward_transform(f, 4)));

  const int Nx = spec.Nx, Nt = spec.Nt;
  const double h = spec.dx(), dt = spec.dt();
  const TensorGrid g = spec.spatial_grid();
  double fmax = 0.0;
  for (const auto& v : f.values()) fmax = std::max(fmax, std::abs(v));
  double worst = 0.0;
  for (int i = Nx / 4; i < 3 * Nx / 4; ++i) {
    const double x = g.nodes[static_cast<std::size_t>(i)];
    for (int k = 0; k < Nt; ++k) {
      const auto s = static_cast<std::size_t>(i);
      const cplx dxx = (f.at(s + 1, k) - 2.0 * f.at(s, k) + f.at(s - 1, k)) / (h * h);
      const cplx dtt = (f.at(s, (k + 1) % Nt) - 2.0 * f.at(s, k) + f.at(s, (k + Nt - 1) % Nt)) / (dt * dt);
      const cplx fd = -dxx - x * x * dtt;
      worst = std::max(worst, std::abs(Gf.at(s, k) - fd));
    }
  }
  CHECK(worst / fmax < 1e-3);
}

TEST_CASE("nonisotropic dilation") {
  SUBCASE("r = 1 is the identity") {
    GridSpec spec{1, 32, 6.0, 16, 2 * kPi};
    std::mt19937_64 rng(1);
    const GridFunction f = sample_modes(spec, random_modes(spec, 3, 3, rng));
    const GridFunction g = nonisotropic_dilate(f, {1.0});
    CHECK(max_diff(g.values(), f.values()) == 0.0);
    CHECK_THROWS_AS(nonisotropic_dilate(f, {0.0}), DomainError);
    CHECK_THROWS_AS(nonisotropic_dilate(f, {-2.0}), DomainError);
  }

  SUBCASE("window mode: norm scales by r^{n+2}") {
    GridSpec spec{1, 64, 8.0, 64, 16.0};
    GridFunction f(spec);
    const TensorGrid g = spec.spatial_grid();
    const double c = spec.t_extent / 2, sig = spec.t_extent / 8;
    for (std::size_t s = 0; s < spec.spatial_size(); ++s) {
      const double x = g.nodes[s];
      for (int k = 0; k < spec.Nt; ++k) {
        const double t = k * spec.dt();
        f.at(s, k) = std::exp(-x * x / 2 - (t - c) * (t - c) / (2 * sig * sig)) * cplx(1.0, 0.5 * x);
      }
    }
    const GridFunction d = nonisotropic_dilate(f, {2.0, TimeExtension::window});
    CHECK(grid_norm2(d) / grid_norm2(f) == doctest::Approx(8.0).epsilon(1e-3));
  }

  SUBCASE("periodic mode moves slice lambda_m to lambda_{4m}") {
    GridSpec spec{1, 128, 10.0, 32, 4 * kPi};
    std::mt19937_64 rng(9);
    const auto modes = random_modes(spec, 3, 2, rng);
    const GridFunction f = sample_modes(spec, modes);
    const GridFunction d = nonisotropic_dilate(f, {2.0});
    const auto cf = forward_transform(f, 6);
    const auto cd = forward_transform(d, 6);
    // Phi^lambda(2x) = 2^{-1/2} Phi^{4 lambda}(x); amplitude 2^3 from D_r.
    const double factor = std::pow(2.0, 2.5);
    double worst = 0.0;
    for (int m = -2; m <= 2; ++m) {
      if (m == 0) continue;
      for (std::size_t i = 0; i < cf.slice(m).size(); ++i)
        worst = std::max(worst, std::abs(cd.slice(4 * m)[i] - factor * cf.slice(m)[i]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("transform error paths") {
  GridSpec spec{1, 64, 2.0, 16, 2 * kPi};
  GridFunction f(spec);
  CHECK_THROWS_AS(forward_transform(f, 8), CapabilityError);
  std::vector<cplx> v(spec.size(), 0.0);
  v[3] = std::nan("");
  CHECK_THROWS_AS(GridFunction(spec, v), DataError);
  CHECK_THROWS_AS(GridFunction(spec, std::vector<cplx>(5)), DomainError);
  SpectralCoefficients c(spec, 2);
  CHECK_THROWS_AS(c.slice(0), DomainError);
  CHECK_THROWS_AS(c.slice(8), DomainError);
  CHECK_NOTHROW(c.slice(-8));
}
