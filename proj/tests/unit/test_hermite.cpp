#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "grushin/errors.hpp"
#include "grushin/hermite.hpp"
#include "grushin/quadrature.hpp"

using namespace grushin;

namespace {

// Eighth-order central difference of g at x along one axis.
template <class F>
double central_derivative(F&& g, double x, double h) {
  static constexpr double c[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double d = 0.0;
  for (int k = 1; k <= 4; ++k) d += c[k - 1] * (g(x + k * h) - g(x - k * h));
  return d / h;
}

HermiteSlice random_slice(int n, int K, double lambda, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  HermiteSlice s(n, K, lambda);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {N(rng), N(rng)};
  return s;
}

}  // namespace

TEST_CASE("hermite_eval examples") {
  const std::vector<double> origin{0.0};
  CHECK(hermite_eval(MultiIndex({0}), 1.0, origin) == doctest::Approx(0.7511255444649425).epsilon(1e-14));
  CHECK(std::abs(hermite_eval(MultiIndex({1}), 1.0, origin)) < 1e-300);
  // h_2(0) = -sqrt(1/2) h_0(0) from the recurrence.
  CHECK(hermite_eval(MultiIndex({2}), 1.0, origin) == doctest::Approx(-0.5311259660135985).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_eval(MultiIndex({0}), 0.0, origin), DomainError);
}

TEST_CASE("hermite_eval scales with |lambda| and is a tensor product") {
  const std::vector<double> x{0.3, -0.7};
  const double lam = -2.5;
  const double a = std::abs(lam);
  const auto h1 = hermite_functions(std::sqrt(a) * x[0], 3);
  const auto h2 = hermite_functions(std::sqrt(a) * x[1], 2);
  const double expected = std::sqrt(a) * h1[3] * h2[2];
  CHECK(hermite_eval(MultiIndex({3, 2}), lam, x) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("recurrence stays bounded and finite for large degree") {
  // Uniform bound on normalized Hermite functions.
  for (double u = -12.0; u <= 12.0; u += 0.01) {
    const auto h = hermite_functions(u, 128);
    for (double v : h) {
      CHECK(std::isfinite(v));
      CHECK(std::abs(v) <= 0.82);
    }
  }
  // Far out, values stay finite with rescaling instead of underflowing to garbage.
  const auto far = hermite_functions(45.0, 1200);
  for (double v : far) CHECK(std::isfinite(v));
  CHECK(std::abs(far.back()) > 1e-6);
}

TEST_CASE("derivative identity matches finite differences") {
  std::vector<double> d(6);
  hermite_function_derivatives(0.4, d);
  for (int k = 0; k < 6; ++k) {
    auto g = [k](double u) { return hermite_functions(u, k)[static_cast<std::size_t>(k)]; };
    CHECK(d[static_cast<std::size_t>(k)] == doctest::Approx(central_derivative(g, 0.4, 1e-3)).epsilon(1e-10));
  }
}

TEST_CASE("gauss_hermite_rule small cases and moments") {
  const auto r1 = gauss_hermite_rule(1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));

  const auto r2 = gauss_hermite_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-15));

  CHECK_THROWS_AS(gauss_hermite_rule(0), DomainError);

  for (int Q : {3, 7, 20, 66}) {
    const auto r = gauss_hermite_rule(Q);
    CHECK(r.exactness_degree == 2 * Q - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      sum += r.weights[i];
      CHECK(r.weights[i] > 0.0);
      if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
    CHECK(sum == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  }

  // int x^m e^{-x^2} = Gamma((m+1)/2) for even m, 0 for odd m.
  const auto r = gauss_hermite_rule(6);
  for (int m = 0; m <= 11; ++m) {
    double q = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) q += r.weights[i] * std::pow(r.nodes[i], m);
    const double exact = (m % 2 == 0) ? std::tgamma((m + 1) / 2.0) : 0.0;
    CHECK(std::abs(q - exact) < 1e-12 * std::max(1.0, exact));
  }
}

TEST_CASE("discrete orthonormality of the scaled basis") {
  for (double lam : {0.5, 1.0, 2.0, -3.0}) {
    const int K = 32;
    const TensorGrid g = gauss_hermite_grid(1, 2 * K + 2, lam);
    const AxisMatrix s = hermite_synthesis_matrix(g, lam, K);
    double worst = 0.0;
    for (int a = 0; a <= K; ++a) {
      for (int b = 0; b <= K; ++b) {
        double ip = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) ip += g.weights[i] * s(i, static_cast<std::size_t>(a)) * s(i, static_cast<std::size_t>(b));
        worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("hermite_analyze recovers basis functions") {
  const double lam = 1.7;
  for (int n : {1, 2}) {
    const int K = 5;
    const auto layout = SimplexLayout::get(n, K);
    for (std::size_t i = 0; i < layout->size(); ++i) {
      const MultiIndex alpha = layout->at(i);
      const auto slice = hermite_analyze([&](std::span<const double> x) { return cplx(hermite_eval(alpha, lam, x)); }, n, lam, K);
      for (std::size_t j = 0; j < slice.size(); ++j) CHECK(std::abs(slice[j] - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
  const auto sum = hermite_analyze(
      [](std::span<const double> x) {
        return cplx(hermite_eval(MultiIndex({0}), 1.0, x) + hermite_eval(MultiIndex({2}), 1.0, x));
      },
      1, 1.0, 6);
  const double expected[] = {1, 0, 1, 0, 0, 0, 0};
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(sum[static_cast<std::size_t>(k)] - expected[k]) < 1e-13);

  CHECK_THROWS_AS(hermite_analyze([](auto) { return cplx(NAN); }, 1, 1.0, 2), DataError);
  CHECK_THROWS_AS(hermite_analyze([](auto) { return cplx(1.0); }, 1, 0.0, 2), DomainError);
}

TEST_CASE("synthesize examples and analyze round trip") {
  HermiteSlice e0 = HermiteSlice::unit(3, 1.0, MultiIndex({0}));
  const std::vector<double> origin{0.0};
  CHECK(hermite_synthesize(e0, origin)[0].real() == doctest::Approx(std::pow(std::numbers::pi, -0.25)));
  HermiteSlice zero(1, 4, 2.0);
  for (const auto& v : hermite_synthesize(zero, std::vector<double>{-1.0, 0.5, 3.0})) CHECK(v == cplx{});

  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3}) {
    const int K = n == 3 ? 5 : 10;
    const double lam = -0.8;
    const HermiteSlice c = random_slice(n, K, lam, rng);
    const TensorGrid g = gauss_hermite_grid(n, 2 * K + 2, lam);
    const auto values = synthesize_on_grid(c, g);
    const HermiteSlice back = analyze_on_grid(values, g, lam, K);
    double err = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) err = std::max(err, std::abs(back[i] - c[i]));
    CHECK(err < 1e-10);

    // Pointwise synthesis agrees with separable synthesis.
    std::vector<double> pts(static_cast<std::size_t>(n) * 5);
    std::vector<std::size_t> ids{0, 3, 17, values.size() / 2, values.size() - 1};
    for (std::size_t p = 0; p < ids.size(); ++p) g.point(ids[p], std::span<double>(pts).subspan(p * static_cast<std::size_t>(n), static_cast<std::size_t>(n)));
    const auto direct = hermite_synthesize(c, pts);
    for (std::size_t p = 0; p < ids.size(); ++p) CHECK(std::abs(direct[p] - values[ids[p]]) < 1e-11);
  }
}

TEST_CASE("truncation indicator reports top-degree mass") {
  HermiteSlice s(1, 3, 1.0);
  s[0] = 1.0;
  s[3] = 1.0;
  CHECK(s.truncation_indicator() == doctest::Approx(0.5));
  CHECK(HermiteSlice(2, 3, 1.0).truncation_indicator() == 0.0);
}

TEST_CASE("ladder examples") {
  const auto e0 = HermiteSlice::unit(2, 1.0, MultiIndex({0}));
  const auto up = ladder_apply(e0, 1, LadderKind::creation);
  CHECK(up.truncation() == 3);
  CHECK(up.coeff(MultiIndex({1})).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(up.norm_squared() == doctest::Approx(2.0));
  const auto down = ladder_apply(e0, 1, LadderKind::annihilation);
  CHECK(down.norm_squared() == 0.0);
  const auto up4 = ladder_apply(HermiteSlice::unit(2, 4.0, MultiIndex({0})), 1, LadderKind::creation);
  CHECK(up4.coeff(MultiIndex({1})).real() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK_THROWS_AS(ladder_apply(e0, 2, LadderKind::creation), DomainError);
}

TEST_CASE("ladder actions match finite differences of (-/+ d/dx + lambda x) for both signs") {
  std::mt19937_64 rng(11);
  for (double lam : {1.3, -0.6}) {
    for (int n : {1, 2}) {
      const int K = 6;
      const HermiteSlice c = random_slice(n, K, lam, rng);
      for (int j = 1; j <= n; ++j) {
        for (auto kind : {LadderKind::creation, LadderKind::annihilation}) {
          const HermiteSlice out = ladder_apply(c, j, kind);
          const double dsign = kind == LadderKind::creation ? -1.0 : 1.0;
          for (double base : {-1.1, 0.2, 0.9}) {
            std::vector<double> x(static_cast<std::size_t>(n), 0.35);
            x[0] = base;
            auto along = [&](double v) {
              std::vector<double> y(x);
              y[static_cast<std::size_t>(j - 1)] = v;
              return hermite_synthesize(c, y)[0];
            };
            const double xj = x[static_cast<std::size_t>(j - 1)];
            auto re = [&](double v) { return along(v).real(); };
            auto im = [&](double v) { return along(v).imag(); };
            const cplx deriv(central_derivative(re, xj, 1e-3), central_derivative(im, xj, 1e-3));
            const cplx fd = dsign * deriv + lam * xj * along(xj);
            const cplx got = hermite_synthesize(out, x)[0];
            CHECK(std::abs(got - fd) < 1e-8 * std::max(1.0, std::abs(fd)));
          }
        }
      }
    }
  }
}

TEST_CASE("ladder algebra: eigenrelation and adjointness") {
  std::mt19937_64 rng(3);
  for (double lam : {0.7, -1.9}) {
    const int n = 2;
    const int K = 6;
    const auto layout = SimplexLayout::get(n, K);
    for (std::size_t i = 0; i < layout->size(); ++i) {
      const HermiteSlice e = HermiteSlice::unit(K, lam, layout->at(i));
      HermiteSlice acc(n, K, lam);
      for (int j = 1; j <= n; ++j) {
        const auto ca = ladder_apply(ladder_apply(e, j, LadderKind::annihilation), j, LadderKind::creation).with_truncation(K);
        const auto ac = ladder_apply(ladder_apply(e, j, LadderKind::creation), j, LadderKind::annihilation).with_truncation(K);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += 0.5 * (ca[k] + ac[k]);
      }
      for (std::size_t k = 0; k < acc.size(); ++k) {
        const double expect = k == i ? e.spectral_value(i) : 0.0;
        CHECK(std::abs(acc[k] - expect) < 1e-12 * std::max(1.0, expect));
      }
    }
    // (A u, v) = (u, A^* v)
    const HermiteSlice u = random_slice(n, K, lam, rng);
    const HermiteSlice v = random_slice(n, K + 1, lam, rng);
    for (int j = 1; j <= n; ++j) {
      const auto Au = ladder_apply(u, j, LadderKind::creation).with_truncation(K + 1);
      const auto Asv = ladder_apply(v, j, LadderKind::annihilation).with_truncation(K);
      cplx lhs{}, rhs{};
      for (std::size_t k = 0; k < v.size(); ++k) lhs += Au[k] * std::conj(v[k]);
      for (std::size_t k = 0; k < u.size(); ++k) rhs += u[k] * std::conj(Asv[k]);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    }
  }
}

TEST_CASE("mehler kernel against the eigen-sum oracle") {
  const std::vector<double> x{0.3}, y{-0.2};
  double sum = 0.0;
  const auto hx = hermite_functions(0.3, 60);
  const auto hy = hermite_functions(-0.2, 60);
  for (int k = 0; k <= 60; ++k) sum += std::exp(-(2 * k + 1) * 0.5) * hx[static_cast<std::size_t>(k)] * hy[static_cast<std::size_t>(k)];
  CHECK(std::abs(mehler_kernel(0.5, 1.0, x, y) - sum) < 1e-10);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> a{U(rng), U(rng)}, b{U(rng), U(rng)};
    const double t = 0.05 + 0.1 * trial;
    CHECK(mehler_kernel(t, 1.3, a, b) == mehler_kernel(t, 1.3, b, a));
    CHECK(mehler_kernel(t, -1.3, a, b) > 0.0);
    for (double lam : {0.5, 2.0}) {
      const double r = std::sqrt(lam);
      const std::vector<double> ra{r * a[0], r * a[1]}, rb{r * b[0], r * b[1]};
      const double lhs = mehler_kernel(t, lam, a, b);
      const double rhs = lam * mehler_kernel(lam * t, 1.0, ra, rb);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
  CHECK_THROWS_AS(mehler_kernel(0.0, 1.0, x, y), DomainError);
  CHECK_THROWS_AS(mehler_kernel(1.0, 0.0, x, y), DomainError);
}

TEST_CASE("mehler kernel large-time branch is continuous") {
  const std::vector<double> x{0.4}, y{-0.1};
  const double below = mehler_kernel(std::nextafter(kMehlerLargeTime, 0.0), 1.0, x, y);
  const double above = mehler_kernel(std::nextafter(kMehlerLargeTime, 100.0), 1.0, x, y);
  CHECK(std::abs(below - above) < 1e-10 * below);
}

TEST_CASE("semigroup property through the kernel") {
  const double lam = 1.4;
  const double t = 0.3, s = 0.45;
  const std::vector<double> x{0.5}, y{-0.8};
  double integral = 0.0;
  const double h = 0.005;
  for (double z = -15.0; z <= 15.0; z += h) {
    const std::vector<double> zz{z};
    integral += h * mehler_kernel(t, lam, x, zz) * mehler_kernel(s, lam, zz, y);
  }
  CHECK(std::abs(integral - mehler_kernel(t + s, lam, x, y)) < 1e-8);
}
