#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "grushin/calculus.hpp"
#include "grushin/errors.hpp"
#include "grushin/riesz.hpp"

using namespace grushin;

namespace {

HermiteSlice random_slice(int n, int K, double lambda, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  HermiteSlice s(n, K, lambda);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {N(rng), N(rng)};
  return s;
}

double max_diff(const HermiteSlice& a, const HermiteSlice& b) {
  const int K = std::max(a.truncation(), b.truncation());
  const auto pa = a.with_truncation(K), pb = b.with_truncation(K);
  double d = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) d = std::max(d, std::abs(pa[i] - pb[i]));
  return d;
}

bool identical(const HermiteSlice& a, const HermiteSlice& b) {
  if (a.truncation() != b.truncation()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// (-d_j + lambda x_j) applied to the Mehler kernel in x by an 8th-order central difference.
double fd_creation_kernel(int j, double lambda, double t, std::vector<double> x, const std::vector<double>& y) {
  static constexpr double c[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const auto ja = static_cast<std::size_t>(j - 1);
  const double h = 1e-3 / std::sqrt(std::abs(lambda));
  const double x0 = x[ja];
  double d = 0.0;
  for (int k = 1; k <= 4; ++k) {
    x[ja] = x0 + k * h;
    const double p = mehler_kernel(t, lambda, x, y);
    x[ja] = x0 - k * h;
    d += c[k - 1] * (p - mehler_kernel(t, lambda, x, y));
  }
  x[ja] = x0;
  return -d / h + lambda * x0 * mehler_kernel(t, lambda, x, y);
}

}  // namespace

TEST_CASE("first-order Riesz examples") {
  const auto e0 = HermiteSlice::unit(3, 1.0, MultiIndex({0}));
  const auto r = riesz_apply({1, RieszKind::plain}, e0);
  CHECK(r.coeff(MultiIndex({1})) == cplx(std::sqrt(2.0)));
  CHECK(r.norm_squared() == doctest::Approx(2.0));
  CHECK(riesz_apply({1, RieszKind::star}, e0).norm_squared() == 0.0);
  CHECK_THROWS_AS(riesz_apply({2, RieszKind::plain}, e0), DomainError);
  CHECK_THROWS_AS(riesz_apply({0, RieszKind::plain}, e0), DomainError);
}

TEST_CASE("Riesz coefficient action is lambda independent") {
  for (int n = 1; n <= 3; ++n) {
    const auto a = random_slice(n, 7, 0.5, 10 + n);
    HermiteSlice b(n, 7, 2.0, std::vector<cplx>(a.coeffs().begin(), a.coeffs().end()));
    for (int j = 1; j <= n; ++j)
      for (auto kind : {RieszKind::plain, RieszKind::star}) {
        const auto ra = riesz_apply({j, kind}, a), rb = riesz_apply({j, kind}, b);
        CHECK(std::equal(ra.coeffs().begin(), ra.coeffs().end(), rb.coeffs().begin(), rb.coeffs().end()));
      }
  }
}

TEST_CASE("Riesz transforms equal ladder composed with H^{-1/2} for both signs") {
  for (double lam : {1.7, -0.6}) {
    CAPTURE(lam);
    const auto f = random_slice(2, 6, lam, 4);
    const auto h = fractional_power_apply(-0.5, f);
    for (int j = 1; j <= 2; ++j) {
      CHECK(max_diff(riesz_apply({j, RieszKind::plain}, f), ladder_apply(h, j, LadderKind::creation)) < 1e-13);
      CHECK(max_diff(riesz_apply({j, RieszKind::star}, f), ladder_apply(h, j, LadderKind::annihilation)) < 1e-13);
    }
  }
}

TEST_CASE("Riesz sum rule and L2 bound") {
  for (int n = 1; n <= 3; ++n) {
    const auto f = random_slice(n, 8, n == 2 ? -1.3 : 0.8, 20 + n);
    double total = 0.0;
    for (int j = 1; j <= n; ++j)
      total += riesz_apply({j, RieszKind::plain}, f).norm_squared() + riesz_apply({j, RieszKind::star}, f).norm_squared();
    CHECK(total == doctest::Approx(2.0 * f.norm_squared()).epsilon(1e-13));
  }
  // Largest per-mode factor of R_1 (n = 1) is sqrt(2), at alpha = 0.
  double worst = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const auto r = riesz_apply({1, RieszKind::plain}, HermiteSlice::unit(40, 1.0, MultiIndex({k})));
    worst = std::max(worst, std::sqrt(r.norm_squared()));
  }
  CHECK(worst == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("higher-order Riesz transforms") {
  SUBCASE("(1,0) reduces to the star transform on axis 1") {
    for (double lam : {0.9, -2.5}) {
      const auto f = random_slice(2, 7, lam, 31);
      CHECK(identical(higher_riesz_apply({1, 0}, f), riesz_apply({1, RieszKind::star}, f)));
    }
  }
  SUBCASE("ladder algebra examples") {
    const auto e10 = HermiteSlice::unit(4, 3.0, MultiIndex({1, 0}));
    const auto r = higher_riesz_apply({1, 1}, e10);
    CHECK(std::abs(r.coeff(MultiIndex({0, 1})) - 0.5) < 1e-15);
    CHECK(r.norm_squared() == doctest::Approx(0.25));
    CHECK(higher_riesz_apply({2, 0}, HermiteSlice::unit(4, 1.0, MultiIndex({0, 0}))).norm_squared() == 0.0);
  }
  SUBCASE("factorization into fractional power and ladder steps") {
    for (double lam : {1.25, -0.75}) {
      for (auto [p, q] : {std::pair{1, 1}, {2, 1}, {1, 2}, {0, 3}, {3, 0}}) {
        CAPTURE(lam);
        CAPTURE(p);
        CAPTURE(q);
        const auto f = random_slice(2, 8, lam, 40 + p + 3 * q);
        auto g = fractional_power_apply(-0.5 * (p + q), f);
        for (int i = 0; i < p; ++i) g = ladder_apply(g, 1, LadderKind::annihilation);
        for (int i = 0; i < q; ++i) g = ladder_apply(g, 2, LadderKind::creation);
        CHECK(max_diff(higher_riesz_apply({p, q}, f), g) < 1e-12);
      }
    }
  }
  SUBCASE("errors") {
    const auto f = random_slice(1, 3, 1.0, 1);
    CHECK_THROWS_AS(higher_riesz_apply({0, 1}, f), DomainError);
    CHECK_THROWS_AS(higher_riesz_apply({0, 0}, f), DomainError);
  }
}

TEST_CASE("shifted powers and the resolvent integral") {
  const auto f = random_slice(2, 6, 1.5, 7);
  CHECK(identical(shifted_power_apply(0.0, 0.5, f), fractional_power_apply(-0.5, f)));

  // mu^{-1/2} - (mu+2)^{-1/2} = int_0^1 (mu + 2s)^{-3/2} ds at mu = 1.
  const auto e0 = HermiteSlice::unit(0, 1.0, MultiIndex({0}));
  const double diff = (shifted_power_apply(0.0, 0.5, e0)[0] - shifted_power_apply(2.0, 0.5, e0)[0]).real();
  CHECK(std::abs(diff - (1.0 - 1.0 / std::sqrt(3.0))) < 1e-15);
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double s) { return shifted_power_apply(2.0 * s, 1.5, e0)[0].real(); }, 0.0, 1.0);
  CHECK(std::abs(integral - diff) < 1e-12);

  // Operator form on every mode: H^{-1/2} - (H + 2|lambda|)^{-1/2} = |lambda| int_0^1 (H + 2|lambda| s)^{-3/2} ds.
  const auto g = random_slice(1, 10, 0.7, 8);
  const auto lhs = shifted_power_apply(0.0, 0.5, g);
  const auto rhs = shifted_power_apply(2.0, 0.5, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double s) { return 0.7 * std::pow(g.spectral_value(i) + 2.0 * 0.7 * s, -1.5); }, 0.0, 1.0);
    worst = std::max(worst, std::abs(lhs[i] - rhs[i] - q * g[i]));
  }
  CHECK(worst < 1e-12);

  CHECK_THROWS_AS(shifted_power_apply(-3.0, 0.5, HermiteSlice(1, 2, 1.0)), DomainError);
}

TEST_CASE("commutation H^{-1/2} A = A (H + 2 lambda)^{-1/2}") {
  for (double lam : {0.8, -1.9}) {
    for (int n = 1; n <= 2; ++n) {
      const auto f = random_slice(n, 9, lam, 50 + n);
      // The raising ladder raises the eigenvalue by 2|lambda|.
      const LadderKind up = lam > 0 ? LadderKind::creation : LadderKind::annihilation;
      for (int j = 1; j <= n; ++j) {
        const auto lhs = fractional_power_apply(-0.5, ladder_apply(f, j, up));
        const auto rhs = ladder_apply(shifted_power_apply(2.0, 0.5, f), j, up);
        CHECK(max_diff(lhs, rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("heat integrand against finite differences of the Mehler kernel") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (double lam : {1.0, 2.0, -0.5}) {
    for (double t : {0.05, 0.4, 2.0}) {
      for (int n = 1; n <= 2; ++n) {
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (auto& v : x) v = U(rng);
        for (auto& v : y) v = U(rng);
        for (int j = 1; j <= n; ++j) {
          CAPTURE(lam);
          CAPTURE(t);
          const double got = riesz_heat_integrand(j, lam, t, x, y);
          const double ref = fd_creation_kernel(j, lam, t, x, y);
          CHECK(std::abs(got - ref) < 1e-7 * (std::abs(ref) + mehler_kernel(t, lam, x, y)));
        }
      }
    }
  }
}

TEST_CASE("kernel scaling identities") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int n = 1; n <= 2; ++n) {
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n)), xs(x.size()), ys(y.size());
    for (double lam : {0.5, 2.0}) {
      for (auto& v : x) v = U(rng);
      for (auto& v : y) v = U(rng);
      for (std::size_t i = 0; i < x.size(); ++i) {
        xs[i] = std::sqrt(lam) * x[i];
        ys[i] = std::sqrt(lam) * y[i];
      }
      for (double t : {0.1, 0.8}) {
        const double lhs = riesz_heat_integrand(1, lam, t, x, y);
        const double rhs = std::pow(lam, 0.5 * (n + 1)) * riesz_heat_integrand(1, 1.0, lam * t, xs, ys);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (std::abs(lhs) + 1e-300) + 1e-300);
      }
      const double k = riesz_kernel_eval(1, lam, x, y);
      const double k1 = std::pow(lam, 0.5 * n) * riesz_kernel_eval(1, 1.0, xs, ys);
      CHECK(std::abs(k - k1) < 1e-10 * std::abs(k));
    }
  }
}

TEST_CASE("Riesz kernel against adaptive quadrature") {
  boost::math::quadrature::exp_sinh<double> oracle;
  const std::pair<std::vector<double>, std::vector<double>> pairs[] = {
      {{0.3}, {-0.2}}, {{1.1}, {0.9}}, {{-2.0}, {1.5}}, {{0.4, -0.1}, {-0.3, 0.6}}};
  for (double lam : {1.0, -1.0, 3.0}) {
    for (const auto& [x, y] : pairs) {
      CAPTURE(lam);
      CAPTURE(x[0]);
      const double got = riesz_kernel_eval(1, lam, x, y);
      const double ref =
          oracle.integrate([&](double t) { return riesz_heat_integrand(1, lam, t, x, y) / std::sqrt(t); }) / std::sqrt(std::numbers::pi);
      CHECK(std::abs(got - ref) < 1e-8 * (std::abs(ref) + 1e-3));
    }
  }
  const std::vector<double> p{0.5};
  CHECK_THROWS_AS(riesz_kernel_eval(1, 1.0, p, p), DomainError);
  CHECK_THROWS_AS(riesz_kernel_eval(1, 0.0, p, std::vector<double>{0.1}), DomainError);
}

TEST_CASE("Calderon-Zygmund profile") {
  const TensorGrid g = uniform_grid(1, 24, 3.0);
  const auto r = cz_profile_refinement(1, 1.0, g);
  CHECK(std::isfinite(r.base.sup));
  CHECK(r.base.sup > 0.0);
  CHECK(r.relative_change < 0.1);

  for (double lam : {0.5, 2.0}) {
    TensorGrid gl = g;
    for (auto& v : gl.nodes) v /= std::sqrt(lam);
    const auto p = cz_profile(1, lam, gl);
    CHECK(std::abs(p.sup - r.base.sup) < 1e-6 * r.base.sup);
  }
}
