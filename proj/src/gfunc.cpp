#include "grushin/gfunc.hpp"

#include <algorithm>
#include <cmath>

#include "grushin/errors.hpp"
#include "grushin/lp.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

namespace {

const LineRule& rule_for(const GFunctionSpec& spec, const HermiteSlice& s, LineRule& storage) {
  if (spec.k < 1) throw DomainError("g-function order k must be >= 1");
  if (spec.t_rule.nodes.empty()) {
    storage = default_g_rule(s.dim(), s.truncation(), s.lambda());
    return storage;
  }
  if (spec.t_rule.nodes.size() != spec.t_rule.weights.size()) throw DomainError("t-rule nodes and weights differ in length");
  for (std::size_t i = 0; i < spec.t_rule.nodes.size(); ++i)
    if (!(spec.t_rule.weights[i] > 0.0) || !(spec.t_rule.nodes[i] > 0.0)) throw DomainError("t-rule needs positive nodes and weights");
  return spec.t_rule;
}

// blocks[d][i]: degree-d part of the slice at grid point i.
std::vector<std::vector<cplx>> degree_blocks(const HermiteSlice& s, const TensorGrid& grid) {
  const int K = s.truncation();
  std::vector<std::vector<cplx>> blocks(static_cast<std::size_t>(K + 1));
  parallel_for(blocks.size(), [&](std::size_t d) {
    HermiteSlice part(s.dim(), K, s.lambda());
    bool any = false;
    for (std::size_t i = s.layout().degree_begin(static_cast<int>(d)); i < s.layout().degree_end(static_cast<int>(d)); ++i) {
      part[i] = s[i];
      any = any || s[i] != cplx{};
    }
    blocks[d] = any ? synthesize_on_grid(part, grid) : std::vector<cplx>();
  });
  return blocks;
}

double mu_of(const HermiteSlice& s, int d) { return (2.0 * d + s.dim()) * std::abs(s.lambda()); }

// d_t^k T_t f at every grid point, for one t.
void time_derivative(const HermiteSlice& s, const std::vector<std::vector<cplx>>& blocks, int k, double t,
                     std::size_t P, std::vector<cplx>& out) {
  out.assign(P, cplx{});
  for (std::size_t d = 0; d < blocks.size(); ++d) {
    if (blocks[d].empty()) continue;
    const double mu = mu_of(s, static_cast<int>(d));
    const double f = std::pow(-mu, k) * std::exp(-t * mu);
    if (f == 0.0) continue;
    for (std::size_t i = 0; i < P; ++i) out[i] += f * blocks[d][i];
  }
}

// Squared |d_t T_t f|^2 weighted by the y-grid weights, one row per t-node.
std::vector<std::vector<double>> weighted_densities(const HermiteSlice& s, const LineRule& rule, const TensorGrid& y) {
  const auto blocks = degree_blocks(s, y);
  const auto wy = y.all_weights();
  std::vector<std::vector<double>> D(rule.nodes.size());
  parallel_for(D.size(), [&](std::size_t j) {
    std::vector<cplx> v;
    time_derivative(s, blocks, 1, rule.nodes[j], y.size(), v);
    D[j].resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) D[j][i] = std::norm(v[i]) * wy[i];
  });
  return D;
}

std::vector<double> star_values(int k, const HermiteSlice& s, const LineRule& rule, const TensorGrid& points,
                                const TensorGrid& y) {
  const int n = s.dim();
  const auto D = weighted_densities(s, rule, y);
  std::vector<double> tfac(rule.nodes.size());
  for (std::size_t j = 0; j < tfac.size(); ++j) tfac[j] = rule.weights[j] * std::pow(rule.nodes[j], 1.0 - 0.5 * n);
  // coordinates of y points, point-major
  std::vector<double> ys(y.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < y.size(); ++i) y.point(i, std::span<double>(ys.data() + i * n, static_cast<std::size_t>(n)));

  std::vector<double> out(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    double x[kMaxDim];
    points.point(p, std::span<double>(x, static_cast<std::size_t>(n)));
    std::vector<double> dist(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        const double d = x[a] - ys[i * n + a];
        r2 += d * d;
      }
      dist[i] = r2;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < D.size(); ++j) {
      const double inv_t = 1.0 / rule.nodes[j];
      double acc = 0.0;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        if (D[j][i] == 0.0) continue;
        const double base = 1.0 / (1.0 + dist[i] * inv_t);
        double w = base;
        for (int e = 1; e < k; ++e) w *= base;
        acc += w * D[j][i];
      }
      total += tfac[j] * acc;
    }
    out[p] = std::sqrt(total);
  });
  return out;
}

}  // namespace

LineRule default_g_rule(int n, int K, double lambda, int nodes) {
  if (lambda == 0.0) throw DomainError("g-functions need lambda != 0");
  const double a = std::abs(lambda);
  return log_trapezoid_rule(1e-6 / ((2.0 * K + n) * a), 20.0 / (n * a), nodes);
}

double g_isometry_constant(int k) { return std::sqrt(std::tgamma(2.0 * k)) * std::pow(2.0, -k); }

std::vector<double> g_k_eval(const GFunctionSpec& spec, const HermiteSlice& slice, const TensorGrid& points) {
  LineRule storage;
  const LineRule& rule = rule_for(spec, slice, storage);
  const auto blocks = degree_blocks(slice, points);
  const std::size_t P = points.size();
  std::vector<std::vector<double>> rows(rule.nodes.size());
  parallel_for(rows.size(), [&](std::size_t j) {
    std::vector<cplx> v;
    const double t = rule.nodes[j];
    time_derivative(slice, blocks, spec.k, t, P, v);
    const double w = rule.weights[j] * std::pow(t, 2 * spec.k - 1);
    rows[j].resize(P);
    for (std::size_t i = 0; i < P; ++i) rows[j][i] = w * std::norm(v[i]);
  });
  std::vector<double> out(P, 0.0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < P; ++i) out[i] += r[i];
  for (double& v : out) v = std::sqrt(v);
  return out;
}

TensorGrid default_g_star_grid(int n, int K, double lambda) {
  if (lambda == 0.0) throw DomainError("g-functions need lambda != 0");
  const double L = (std::sqrt(2.0 * K + n) + 6.0) / std::sqrt(std::abs(lambda));
  return uniform_grid(n, n == 1 ? 256 : 48, L);
}

GStarResult g_star_eval(const GFunctionSpec& spec, const HermiteSlice& slice, const TensorGrid& points,
                        const std::optional<TensorGrid>& y_grid) {
  LineRule storage;
  const LineRule& rule = rule_for(spec, slice, storage);
  if (points.n != slice.dim()) throw DomainError("grid dimension does not match slice");
  const TensorGrid y = y_grid ? *y_grid : default_g_star_grid(slice.dim(), slice.truncation(), slice.lambda());
  if (y.n != slice.dim()) throw DomainError("y-grid dimension does not match slice");
  return {star_values(spec.k, slice, rule, points, y), 2 * spec.k > slice.dim()};
}

GStarCellBound g_star_cell_bound(const GFunctionSpec& spec, const HermiteSlice& slice, const TensorGrid& grid) {
  LineRule storage;
  const LineRule& rule = rule_for(spec, slice, storage);
  const auto star = star_values(spec.k, slice, rule, grid, grid);
  GFunctionSpec one{1, rule};
  const auto g1 = g_k_eval(one, slice, grid);
  const double t_max = *std::max_element(rule.nodes.begin(), rule.nodes.end());
  const auto w = grid.all_weights();
  GStarCellBound out;
  out.c_grid = *std::min_element(w.begin(), w.end()) * std::pow(t_max, -0.5 * slice.dim());
  out.min_ratio = INFINITY;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    if (g1[i] == 0.0) continue;
    out.min_ratio = std::min(out.min_ratio, star[i] * star[i] / (out.c_grid * g1[i] * g1[i]));
  }
  if (!std::isfinite(out.min_ratio)) out.min_ratio = 1.0;
  out.holds = out.min_ratio >= 1.0 - 1e-12;
  return out;
}

GPointwiseRatios g_pointwise_ratios(int k, const HermiteSlice& slice, const ScalarSymbol& m, const TensorGrid& grid) {
  const LineRule rule = default_g_rule(slice.dim(), slice.truncation(), slice.lambda());
  const auto gk = g_k_eval({k, rule}, slice, grid);
  const auto gk1 = g_k_eval({k + 1, rule}, slice, grid);
  const auto gm = g_k_eval({k + 1, rule}, apply_scalar_multiplier(m, slice), grid);
  const auto star = g_star_eval({k, rule}, slice, grid).values;
  const double floor_k1 = 1e-10 * *std::max_element(gk1.begin(), gk1.end());
  const double floor_s = 1e-10 * *std::max_element(star.begin(), star.end());
  GPointwiseRatios r;
  for (std::size_t i = 0; i < gk.size(); ++i) {
    if (gk1[i] > floor_k1) r.ladder = std::max(r.ladder, gk[i] / gk1[i]);
    if (star[i] > floor_s) r.multiplier = std::max(r.multiplier, gm[i] / star[i]);
  }
  return r;
}

GEquivalenceReport g_norm_equivalence_report(std::span<const HermiteSlice> family, double p, std::vector<double> lambdas) {
  if (family.empty()) throw DataError("g-function equivalence needs a non-empty family");
  require_exponent(p);
  if (lambdas.empty()) {
    for (const auto& s : family) lambdas.push_back(s.lambda());
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  }
  GEquivalenceReport rep;
  rep.p = p;
  rep.lambdas = lambdas;
  for (const auto& s : family)
    if (s.norm_squared() == 0.0) ++rep.excluded_zero;
  if (rep.excluded_zero == family.size()) throw DataError("g-function equivalence family has only zero functions");
  for (double lam : lambdas) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& s : family) {
      if (s.norm_squared() == 0.0) continue;
      const HermiteSlice f(s.dim(), s.truncation(), lam, std::vector<cplx>(s.coeffs().begin(), s.coeffs().end()));
      const TensorGrid grid = default_g_star_grid(f.dim(), f.truncation(), lam);
      const auto vals = synthesize_on_grid(f, grid);
      const auto g = g_k_eval({1, {}}, f, grid);
      const double ratio = lp_norm(g, grid, p) / lp_norm(vals, grid, p);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    rep.c1.push_back(lo);
    rep.c2.push_back(hi);
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return (*mx - *mn) / *mx;
  };
  rep.spread = std::max(spread(rep.c1), spread(rep.c2));
  rep.lambda_stable = rep.spread < 0.25;
  return rep;
}

}  // namespace grushin
