#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grushin/errors.hpp"
#include "grushin/norm_lab.hpp"

using namespace grushin;

TEST_CASE("discrete L^p norms") {
  SUBCASE("constant on the box") {
    const GridSpec spec{1, 16, 2.0, 8, 3.0};
    const GridFunction f(spec, std::vector<cplx>(spec.size(), cplx(0.0, -1.5)));
    for (double p : {1.5, 2.0, 4.0}) CHECK(lp_norm(f, p) == doctest::Approx(1.5 * std::pow(12.0, 1.0 / p)).epsilon(1e-13));
  }
  SUBCASE("Gaussian") {
    const TensorGrid g = uniform_grid(1, 256, 10.0);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-g.nodes[i] * g.nodes[i] / 2);
    CHECK(std::abs(lp_norm(v, g, 2.0) - std::pow(std::numbers::pi, 0.25)) < 1e-6);
  }
  SUBCASE("Parseval agreement") {
    const GridSpec spec{1, 64, 8.0, 32, 2 * std::numbers::pi};
    TestFunctionSpec t;
    t.K_max = 6;
    t.m_max = 3;
    t.seed = 77;
    const auto c = make_test_coefficients(t, spec);
    const auto f = inverse_transform(c);
    CHECK(std::abs(lp_norm(f, 2.0) / std::sqrt(c.parseval_energy()) - 1.0) < 1e-6);
  }
  SUBCASE("unsupported exponents") {
    const GridSpec spec{1, 8, 1.0, 8, 1.0};
    const GridFunction f(spec);
    CHECK_THROWS_AS(lp_norm(f, 1.0), CapabilityError);
    CHECK_THROWS_AS(lp_norm(f, 0.5), CapabilityError);
    CHECK_THROWS_AS(lp_norm(f, INFINITY), CapabilityError);
  }
}

TEST_CASE("test functions") {
  const GridSpec spec;
  TestFunctionSpec t;
  t.seed = 123;
  t.K_max = 5;
  t.m_max = 3;
  const auto a = make_test_function(t, spec), b = make_test_function(t, spec);
  CHECK(a.values().size() == b.values().size());
  bool same = true;
  for (std::size_t i = 0; i < a.values().size(); ++i) same = same && a.values()[i] == b.values()[i];
  CHECK(same);
  CHECK(std::abs(lp_norm(a, 2.0) - 1.0) < 1e-12);

  const auto c = forward_transform(a, 12);
  for (std::size_t s = 0; s < c.slice_count(); ++s) {
    const int m = c.frequency_index(s);
    const auto& sl = c.slices()[s];
    for (std::size_t i = 0; i < sl.size(); ++i)
      if (std::abs(m) > t.m_max || sl.layout().degree(i) > t.K_max) CHECK(std::abs(sl[i]) < 1e-9);
  }

  t.kind = TestFunctionKind::bump;
  const auto bump = make_test_function(t, spec);
  CHECK(std::abs(lp_norm(bump, 2.0) - 1.0) < 1e-12);

  t.kind = TestFunctionKind::mode;
  t.mode_degree = 2;
  t.mode_m = -1;
  const auto mode = forward_transform(make_test_function(t, spec), 5);
  CHECK(std::abs(std::abs(mode.slice(-1).coeff(MultiIndex({2}))) - std::sqrt(spec.t_extent)) < 1e-9);

  t.kind = TestFunctionKind::hermite_random;
  t.m_max = 40;
  CHECK_THROWS_AS(make_test_function(t, spec), CapabilityError);
  t.m_max = 3;
  t.K_max = 60;
  CHECK_THROWS_AS(make_test_function(t, spec), CapabilityError);
  CHECK(parse_test_function_kind("bump") == TestFunctionKind::bump);
  CHECK_THROWS_AS(parse_test_function_kind("spline"), ConfigError);
}

TEST_CASE("operator pipelines") {
  const auto p = OperatorPipeline::parse(" riesz:1 | multiplier:heat:0.5 |bochner:4, 1.5");
  CHECK(p.stages().size() == 3);
  CHECK(p.name() == "riesz:1|multiplier:heat:0.5|bochner:4, 1.5");
  CHECK(OperatorPipeline::parse("identity|identity").is_identity());
  CHECK_FALSE(OperatorPipeline::parse("identity|zero").is_identity());
  for (const char* bad : {"", "riesz", "riesz:x", "riesz:0", "bochner:1", "bochner:-1,1", "foo", "identity:2", "a||b",
                          "multiplier:exp", "higher-riesz:1"})
    CHECK_THROWS_AS(OperatorPipeline::parse(bad), ConfigError);
  const auto e = HermiteSlice::unit(4, 1.0, MultiIndex({0}));
  CHECK(std::abs(OperatorPipeline::parse("riesz:1").apply(e)[1] - cplx(std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("operator norm probe") {
  ProbeOptions opt;
  opt.trials = 16;
  SUBCASE("identity") {
    const auto r = operator_norm_probe(OperatorPipeline::parse("identity"), 3.0, opt);
    CHECK(std::abs(r.max_ratio - 1.0) < 1e-12);
    CHECK(r.stable);
    CHECK(r.ratios.size() == r.trials - r.skipped);
  }
  SUBCASE("zero") {
    const auto r = operator_norm_probe(OperatorPipeline::parse("zero"), 2.0, opt);
    CHECK(r.max_ratio == 0.0);
    CHECK(r.stable);
  }
  SUBCASE("R_1 at p = 2 approaches sqrt 2") {
    opt.trials = 256;
    opt.refine = false;
    const auto r = operator_norm_probe(OperatorPipeline::parse("riesz:1"), 2.0, opt);
    CHECK(std::abs(r.max_ratio / std::sqrt(2.0) - 1.0) < 0.02);
    CHECK(r.max_ratio <= std::sqrt(2.0) * (1.0 + 1e-6));
  }
  SUBCASE("stored seeds reproduce every ratio") {
    const auto op = OperatorPipeline::parse("multiplier:rational");
    opt.refine = false;
    const auto r = operator_norm_probe(op, 4.0, opt);
    REQUIRE(r.skipped == 0);
    for (std::size_t i = 0; i < r.ratios.size(); ++i) CHECK(probe_trial_ratio(op, 4.0, opt, i) == r.ratios[i]);
    const auto again = operator_norm_probe(op, 4.0, opt);
    CHECK(again.ratios == r.ratios);
  }
  SUBCASE("p-duality spot check for a real diagonal operator") {
    const auto op = OperatorPipeline::parse("multiplier:heat:0.2");
    opt.refine = false;
    const double a = operator_norm_probe(op, 4.0, opt).max_ratio;
    const double b = operator_norm_probe(op, 4.0 / 3.0, opt).max_ratio;
    CHECK(std::abs(a - b) <= 0.3 * std::max(a, b));
  }
  SUBCASE("stability rule") {
    CHECK(refinement_stable({1.0, 1.2, 0.8}));
    CHECK_FALSE(refinement_stable({1.0, 1.3}));
    CHECK_FALSE(refinement_stable({1.0}));
    CHECK(refinement_stable({0.0, 0.0}));
  }
}

TEST_CASE("R-bound probe") {
  RBoundOptions opt;
  opt.trials = 16;
  SUBCASE("single lambda, identity") {
    const auto r = r_bound_probe(OperatorPipeline::parse("identity"), {0.7}, 4.0, opt);
    for (double v : r.ratios) CHECK(std::abs(v - 1.0) < 1e-13);
  }
  SUBCASE("resolvent family") {
    const auto lams = default_lambdas(8, 3);
    for (double l : lams) {
      CHECK(l >= 0.1);
      CHECK(l <= 10.0);
    }
    const auto r = r_bound_probe(OperatorPipeline::parse("multiplier:rational"), lams, 4.0, opt);
    CHECK(std::isfinite(r.max_ratio));
    CHECK(r.max_ratio > 0.0);
    CHECK(r.max_ratio < 1.0);  // |m| < 1 on the spectrum and p-boundedness of the semigroup
    CHECK(r.stable);
    CHECK(r.refinement.size() == 3);
  }
  SUBCASE("order of the lambda list is irrelevant") {
    std::vector<double> lams{2.0, 0.3, 5.0, 0.9};
    const auto op = OperatorPipeline::parse("riesz:1");
    const auto a = r_bound_probe(op, lams, 1.5, opt);
    std::reverse(lams.begin(), lams.end());
    const auto b = r_bound_probe(op, lams, 1.5, opt);
    CHECK(a.ratios == b.ratios);
  }
  SUBCASE("J = 1 reduces to the single-slice ratio") {
    const auto op = OperatorPipeline::parse("riesz:1");
    for (double lam : {0.4, 3.0}) {
      RBoundOptions o = opt;
      o.refine = false;
      const auto r = r_bound_probe(op, {lam}, 2.0, o);
      REQUIRE(r.ratios.size() == o.trials);
      for (std::size_t i = 0; i < o.trials; ++i) {
        // the same slice measured through its coefficients
        const auto f = random_slice_family({lam}, o, i).front();
        CHECK(std::abs(r.ratios[i] - std::sqrt(op.apply(f).norm_squared() / f.norm_squared())) < 1e-8);
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(r_bound_probe(OperatorPipeline::parse("identity"), {0.0}, 2.0, opt), DomainError);
    CHECK_THROWS_AS(r_bound_probe(OperatorPipeline::parse("identity"), {1.0}, 1.0, opt), CapabilityError);
  }
}

TEST_CASE("Fefferman-Stein probe") {
  RBoundOptions opt;
  opt.trials = 12;
  const auto r = fefferman_stein_probe(default_lambdas(6, 11), 2.0, opt);
  for (double v : r.ratios) CHECK(v >= 1.0);
  CHECK(std::isfinite(r.max_ratio));
  CHECK(r.stable);
}

TEST_CASE("kernel scaling: lambda-derivative") {
  const double x1[] = {0.4}, y1[] = {-0.9};
  const double x2[] = {0.3, -0.2}, y2[] = {0.5, 1.1};
  for (const auto& m : {symbol_heat(0.3), symbol_rational()}) {
    for (double lam : {0.6, -1.7, 3.0}) {
      const auto c1 = kernel_lambda_derivative_check(m, 30, lam, x1, y1);
      CHECK(c1.relative_error < 1e-4);
      const auto c2 = kernel_lambda_derivative_check(m, 12, lam, x2, y2);
      CHECK(c2.relative_error < 1e-4);
    }
  }
}
