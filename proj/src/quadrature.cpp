#include "grushin/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "grushin/errors.hpp"
#include "grushin/hermite.hpp"

namespace grushin {

namespace {

// Orthonormal polynomials for e^{-x^2}: returns p_Q(x) and p_{Q-1}(x).
std::pair<double, double> orthonormal_pair(int Q, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < Q; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

QuadratureRule gauss_hermite_rule(int Q) {
  if (Q <= 0) throw DomainError("Gauss-Hermite node count must be positive");
  if (Q > 600) throw CapabilityError("Gauss-Hermite node count above 600 is not supported");

  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(Q), 0.0);
  rule.weights.assign(static_cast<std::size_t>(Q), 0.0);
  rule.function_weights.assign(static_cast<std::size_t>(Q), 0.0);
  rule.exactness_degree = 2 * Q - 1;

  const int half = (Q + 1) / 2;
  std::vector<double> roots(static_cast<std::size_t>(half));
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // Initial guesses for the roots, largest first.
    if (i == 0) {
      z = std::sqrt(2.0 * Q + 1.0) - 1.85575 * std::pow(2.0 * Q + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(Q), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[static_cast<std::size_t>(i - 2)];
    }
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = orthonormal_pair(Q, z);
      const double dp = std::sqrt(2.0 * Q) * pm1;
      const double step = p / dp;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    roots[static_cast<std::size_t>(i)] = z;
  }
  if (Q % 2 == 1) roots[static_cast<std::size_t>(half - 1)] = 0.0;

  std::vector<double> h(static_cast<std::size_t>(Q));
  for (int i = 0; i < half; ++i) {
    const double x = roots[static_cast<std::size_t>(i)];
    hermite_functions(x, h);
    double sum_h = 0.0;
    for (double v : h) sum_h += v * v;
    const double fw = 1.0 / sum_h;
    const double w = fw * std::exp(-x * x);
    const auto hi = static_cast<std::size_t>(Q - 1 - i);
    const auto lo = static_cast<std::size_t>(i);
    rule.nodes[hi] = x;
    rule.nodes[lo] = -x;
    rule.weights[hi] = rule.weights[lo] = w;
    rule.function_weights[hi] = rule.function_weights[lo] = fw;
  }
  return rule;
}

LineRule tanh_sinh_rule(double b, int nodes, double u_max) {
  if (!(b > 0.0)) throw DomainError("tanh-sinh interval length must be positive");
  if (nodes < 2) throw DomainError("tanh-sinh rule needs at least two nodes");
  LineRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(nodes));
  rule.weights.reserve(static_cast<std::size_t>(nodes));
  const double h = 2.0 * u_max / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double u = -u_max + (i + 0.5) * h;
    const double e = std::exp(-std::numbers::pi * std::sinh(u));
    const double t = b / (1.0 + e);
    const double dt = b * std::numbers::pi * std::cosh(u) * e / ((1.0 + e) * (1.0 + e));
    if (t <= 0.0 || !std::isfinite(dt) || dt <= 0.0) continue;
    rule.nodes.push_back(t);
    rule.weights.push_back(dt * h);
  }
  return rule;
}

LineRule exp_sinh_rule(int nodes, double v_max) {
  if (nodes < 2) throw DomainError("exp-sinh rule needs at least two nodes");
  LineRule rule;
  const double h = 2.0 * v_max / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double v = -v_max + (i + 0.5) * h;
    const double t = std::exp(0.5 * std::numbers::pi * std::sinh(v));
    const double dt = t * 0.5 * std::numbers::pi * std::cosh(v);
    if (t <= 0.0 || !std::isfinite(t)) continue;
    rule.nodes.push_back(t);
    rule.weights.push_back(dt * h);
  }
  return rule;
}

LineRule log_trapezoid_rule(double a, double b, int nodes) {
  if (!(a > 0.0) || !(b > a)) throw DomainError("log-trapezoid rule needs 0 < a < b");
  if (nodes < 2) throw DomainError("log-trapezoid rule needs at least two nodes");
  LineRule rule;
  rule.nodes.resize(static_cast<std::size_t>(nodes));
  rule.weights.resize(static_cast<std::size_t>(nodes));
  const double la = std::log(a);
  const double step = (std::log(b) - la) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) {
    const double t = std::exp(la + i * step);
    const double end = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    rule.nodes[static_cast<std::size_t>(i)] = t;
    rule.weights[static_cast<std::size_t>(i)] = end * step * t;
  }
  return rule;
}

}  // namespace grushin
