#include "grushin/calculus.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "grushin/errors.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

namespace {

// Fornberg's recursion for the weights of the k-th derivative at 0 on the
// integer stencil -p..p.
std::vector<double> fornberg_weights(int k, int p) {
  const int npts = 2 * p + 1;
  std::vector<double> x(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) x[static_cast<std::size_t>(i)] = i - p;
  // c[j][m]: weight of point j for derivative m.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(npts), std::vector<double>(static_cast<std::size_t>(k + 1), 0.0));
  double c1 = 1.0;
  double c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < npts; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const int mn = std::min(i, k);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[ui];
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double c3 = x[ui] - x[uj];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m) {
          const auto um = static_cast<std::size_t>(m);
          c[ui][um] = c1 * (m * c[ui - 1][um - 1] - c5 * c[ui - 1][um]) / c2;
        }
        c[ui][0] = -c1 * c5 * c[ui - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) {
        const auto um = static_cast<std::size_t>(m);
        c[uj][um] = (c4 * c[uj][um] - m * c[uj][um - 1]) / c3;
      }
      c[uj][0] = c4 * c[uj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  return w;
}

const std::vector<double>& cached_weights(int k) {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t;
    for (int kk = 0; kk <= 12; ++kk) t.push_back(fornberg_weights(kk, (kk + 1) / 2 + 1));
    return t;
  }();
  if (k < 0 || k > 12) throw DomainError("finite-difference order must lie in [0, 12]");
  return table[static_cast<std::size_t>(k)];
}

// prod_{j<k} (a - j)
cplx falling(cplx a, int k) {
  cplx p = 1.0;
  for (int j = 0; j < k; ++j) p *= a - static_cast<double>(j);
  return p;
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw ConfigError("symbol '" + std::string(what) + "': cannot parse parameter '" + std::string(text) + "'");
  return v;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

cplx ScalarSymbol::derivative(int k, double mu) const {
  if (k == 0) return eval(mu);
  if (has_analytic(k)) return derivatives[static_cast<std::size_t>(k - 1)](mu);
  return finite_difference_derivative(eval, k, mu);
}

cplx finite_difference_derivative(const std::function<cplx(double)>& f, int k, double mu) {
  if (k == 0) return f(mu);
  const auto& w = cached_weights(k);
  const int p = static_cast<int>(w.size() / 2);
  const double h = mu * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2));
  cplx sum{};
  for (int i = -p; i <= p; ++i) {
    const double wi = w[static_cast<std::size_t>(i + p)];
    if (wi != 0.0) sum += wi * f(mu + i * h);
  }
  return sum / std::pow(h, k);
}

// ---------------------------------------------------------------------------
// Symbol factories

ScalarSymbol symbol_one() {
  ScalarSymbol m;
  m.name = "one";
  m.eval = [](double) { return cplx(1.0); };
  m.declared_order = 4;
  for (int k = 1; k <= 4; ++k) m.derivatives.emplace_back([](double) { return cplx(0.0); });
  return m;
}

ScalarSymbol symbol_identity() {
  ScalarSymbol m;
  m.name = "identity";
  m.eval = [](double mu) { return cplx(mu); };
  m.declared_order = 4;
  m.derivatives.emplace_back([](double) { return cplx(1.0); });
  for (int k = 2; k <= 4; ++k) m.derivatives.emplace_back([](double) { return cplx(0.0); });
  return m;
}

ScalarSymbol symbol_heat(double s) {
  ScalarSymbol m;
  m.name = "heat:" + format_number(s);
  m.eval = [s](double mu) { return cplx(std::exp(-s * mu)); };
  m.declared_order = 4;
  for (int k = 1; k <= 4; ++k) m.derivatives.emplace_back([s, k](double mu) { return cplx(std::pow(-s, k) * std::exp(-s * mu)); });
  return m;
}

ScalarSymbol symbol_power(double s) {
  ScalarSymbol m;
  m.name = "power:" + format_number(s);
  m.eval = [s](double mu) { return cplx(std::pow(mu, s)); };
  m.declared_order = 4;
  for (int k = 1; k <= 4; ++k)
    m.derivatives.emplace_back([s, k](double mu) { return falling(s, k) * std::pow(mu, s - k); });
  return m;
}

ScalarSymbol symbol_cesaro(double delta) {
  if (!(delta >= 0.0)) throw DomainError("Bochner-Riesz order delta must be non-negative");
  ScalarSymbol m;
  m.name = "cesaro-delta:" + format_number(delta);
  m.eval = [delta](double mu) {
    if (mu >= 1.0) return cplx(0.0);
    return cplx(delta == 0.0 ? 1.0 : std::pow(1.0 - mu, delta));
  };
  m.declared_order = 4;
  for (int k = 1; k <= 4; ++k)
    m.derivatives.emplace_back([delta, k](double mu) {
      if (mu >= 1.0 || delta == 0.0) return cplx(0.0);
      return (k % 2 == 0 ? 1.0 : -1.0) * falling(delta, k) * std::pow(1.0 - mu, delta - k);
    });
  return m;
}

ScalarSymbol symbol_imaginary_power(double tau) {
  ScalarSymbol m;
  m.name = "imaginary-power:" + format_number(tau);
  const cplx e(0.0, tau);
  m.eval = [e](double mu) { return std::pow(cplx(mu), e); };
  m.declared_order = 4;
  for (int k = 1; k <= 4; ++k)
    m.derivatives.emplace_back([e, k](double mu) { return falling(e, k) * std::pow(cplx(mu), e - static_cast<double>(k)); });
  return m;
}

ScalarSymbol symbol_rational() {
  ScalarSymbol m;
  m.name = "rational";
  m.eval = [](double mu) { return cplx(1.0 / (1.0 + mu)); };
  m.declared_order = 4;
  for (int k = 1; k <= 4; ++k)
    m.derivatives.emplace_back([k](double mu) { return cplx(falling(-1.0, k).real() * std::pow(1.0 + mu, -1 - k)); });
  return m;
}

ScalarSymbol symbol_product(const ScalarSymbol& a, const ScalarSymbol& b) {
  ScalarSymbol m;
  m.name = a.name + "*" + b.name;
  m.eval = [fa = a.eval, fb = b.eval](double mu) { return fa(mu) * fb(mu); };
  return m;
}

ScalarSymbol symbol_sum(const ScalarSymbol& a, const ScalarSymbol& b) {
  ScalarSymbol m;
  m.name = a.name + "+" + b.name;
  m.eval = [fa = a.eval, fb = b.eval](double mu) { return fa(mu) + fb(mu); };
  const int order = static_cast<int>(std::min(a.derivatives.size(), b.derivatives.size()));
  for (int k = 1; k <= order; ++k) {
    if (!a.has_analytic(k) || !b.has_analytic(k)) break;
    m.derivatives.emplace_back([da = a.derivatives[static_cast<std::size_t>(k - 1)],
                                db = b.derivatives[static_cast<std::size_t>(k - 1)]](double mu) { return da(mu) + db(mu); });
  }
  m.declared_order = static_cast<int>(m.derivatives.size());
  return m;
}

ScalarSymbol parse_symbol(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "one" && arg.empty()) return symbol_one();
  if (head == "rational" && (arg.empty() || arg == "(1+mu)^{-1}" || arg == "(1+μ)^{-1}")) return symbol_rational();
  if (arg.empty()) throw ConfigError("unknown symbol '" + std::string(text) + "'");
  const double v = parse_number(arg, head);
  if (head == "heat") {
    if (!(v > 0.0)) throw ConfigError("symbol heat: time must be positive");
    return symbol_heat(v);
  }
  if (head == "power") return symbol_power(v);
  if (head == "cesaro-delta") {
    if (!(v >= 0.0)) throw ConfigError("symbol cesaro-delta: delta must be non-negative");
    return symbol_cesaro(v);
  }
  if (head == "imaginary-power") return symbol_imaginary_power(v);
  throw ConfigError("unknown symbol '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Diagonal application

HermiteSlice apply_scalar_multiplier(const ScalarSymbol& m, const HermiteSlice& s) {
  HermiteSlice out = s;
  const std::size_t K1 = static_cast<std::size_t>(s.truncation()) + 1;
  // The factor depends on |alpha| only; evaluate once per degree.
  std::vector<cplx> factor(K1);
  for (std::size_t k = 0; k < K1; ++k) {
    const double mu = (2.0 * static_cast<double>(k) + s.dim()) * std::abs(s.lambda());
    const cplx v = m(mu);
    if (!finite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "symbol " << m.name << " is not finite at mu = " << mu;
      throw EvaluationError(os.str());
    }
    factor[k] = v;
  }
  const auto& layout = s.layout();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor[static_cast<std::size_t>(layout.degree(i))];
  return out;
}

SpectralCoefficients apply_scalar_multiplier(const ScalarSymbol& m, const SpectralCoefficients& c) {
  return map_slices(c, [&m](const HermiteSlice& s) { return apply_scalar_multiplier(m, s); });
}

HermiteSlice fractional_power_apply(double s, const HermiteSlice& slice) {
  HermiteSlice out = slice;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::pow(slice.spectral_value(i), s);
  return out;
}

SpectralCoefficients fractional_power_apply(double s, const SpectralCoefficients& c) {
  return map_slices(c, [s](const HermiteSlice& sl) { return fractional_power_apply(s, sl); });
}

double semigroup_inverse_sqrt(double mu, int nodes) {
  if (!(mu > 0.0)) throw DomainError("semigroup integral needs mu > 0");
  const LineRule rule = exp_sinh_rule(nodes);
  // Substituting t = u / mu keeps the rule's scale fixed.
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    s += rule.weights[i] * std::exp(-u) / std::sqrt(u);
  }
  return s / std::sqrt(mu) / std::sqrt(std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Hormander-Mihlin sampling

HormanderReport hormander_check(const ScalarSymbol& m, int N, double mu_lo, double mu_hi, int samples) {
  if (N < 1) throw DomainError("Hormander order N must be at least 1");
  if (!(mu_lo > 0.0) || !(mu_hi > mu_lo) || !std::isfinite(mu_hi)) throw DomainError("mu range must satisfy 0 < lo < hi < inf");
  if (samples < 2) throw DomainError("Hormander check needs at least two samples");
  HormanderReport r;
  r.order = N;
  r.mu_lo = mu_lo;
  r.mu_hi = mu_hi;
  r.samples = samples;
  r.sup.assign(static_cast<std::size_t>(N + 1), 0.0);
  r.argmax.assign(static_cast<std::size_t>(N + 1), mu_lo);
  const double step = std::log(mu_hi / mu_lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double mu = i == samples - 1 ? mu_hi : mu_lo * std::exp(i * step);
    for (int k = 0; k <= N; ++k) {
      cplx d;
      try {
        d = m.derivative(k, mu);
      } catch (const std::exception& e) {
        throw EvaluationError("symbol " + m.name + ": derivative of order " + std::to_string(k) + " failed: " + e.what());
      }
      const double v = finite(d) ? std::pow(mu, k) * std::abs(d) : std::numeric_limits<double>::infinity();
      const auto uk = static_cast<std::size_t>(k);
      if (!(v <= r.sup[uk])) {
        r.sup[uk] = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
        r.argmax[uk] = mu;
      }
    }
  }
  r.bounded = true;
  for (double s : r.sup)
    if (!(s < kHormanderThreshold)) r.bounded = false;
  return r;
}

}  // namespace grushin
