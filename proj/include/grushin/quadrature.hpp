#pragma once

#include <vector>

namespace grushin {

// Gauss-Hermite rule for the weight e^{-x^2}.
//   sum_i weights[i] p(nodes[i]) = int p(x) e^{-x^2} dx  for deg p <= exactness_degree.
// function_weights[i] = weights[i] e^{nodes[i]^2} integrates functions that
// already carry the Gaussian factor (products of Hermite functions), and is
// computed directly so it stays accurate where weights[i] underflows.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> function_weights;
  int exactness_degree = 0;
};

// Q-node Gauss-Hermite rule, nodes strictly increasing. Throws DomainError for Q <= 0.
QuadratureRule gauss_hermite_rule(int Q);

// Nodes and positive weights of a one-dimensional rule on a half line or interval.
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Double-exponential rule on (0, b]: t = b / (1 + exp(-pi sinh u)), u on a
// uniform midpoint grid over [-u_max, u_max]. Clusters nodes at both ends,
// which absorbs integrable t^{-1/2} singularities at 0.
LineRule tanh_sinh_rule(double b, int nodes, double u_max = 3.2);

// Double-exponential rule on (0, inf): t = exp((pi/2) sinh v).
LineRule exp_sinh_rule(int nodes, double v_max = 4.5);

// Trapezoid rule in log t over [a, b]: weights already include the t Jacobian.
LineRule log_trapezoid_rule(double a, double b, int nodes);

}  // namespace grushin
