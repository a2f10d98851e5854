#include "grushin/bochner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

double truncated_power(double u, double delta) {
  if (!(u < 1.0)) return 0.0;
  if (delta == 0.0) return 1.0;
  return std::pow(1.0 - u, delta);
}

namespace {

void require_spec(const RieszMeanSpec& s) {
  if (!(s.R > 0.0) || !std::isfinite(s.R)) throw DomainError("Bochner-Riesz threshold R must be positive");
  if (!(s.delta >= 0.0) || !std::isfinite(s.delta)) throw DomainError("Bochner-Riesz order delta must be non-negative");
}

// Scales the degree-k block by factor(k).
template <class F>
HermiteSlice scale_degrees(const HermiteSlice& in, F&& factor) {
  HermiteSlice out = in;
  const auto& layout = in.layout();
  for (int k = 0; k <= in.truncation(); ++k) {
    const double f = factor(k);
    for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) out[i] *= f;
  }
  return out;
}

std::vector<double> densify(const std::vector<double>& r) {
  std::vector<double> out;
  out.reserve(2 * r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.push_back(r[i]);
    if (i + 1 < r.size()) out.push_back(std::sqrt(r[i] * r[i + 1]));
  }
  return out;
}

}  // namespace

HermiteSlice bochner_riesz_apply(const RieszMeanSpec& spec, const HermiteSlice& slice) {
  require_spec(spec);
  const double lam = std::abs(slice.lambda());
  const int n = slice.dim();
  return scale_degrees(slice, [&](int k) { return truncated_power((2.0 * k + n) * lam / spec.R, spec.delta); });
}

SpectralCoefficients bochner_riesz_apply(const RieszMeanSpec& spec, const SpectralCoefficients& c) {
  require_spec(spec);
  return map_slices(c, [&spec](const HermiteSlice& s) { return bochner_riesz_apply(spec, s); });
}

HermiteSlice hermite_bochner_riesz(const RieszMeanSpec& spec, const HermiteSlice& slice) {
  require_spec(spec);
  const int n = slice.dim();
  return scale_degrees(slice, [&](int k) { return truncated_power((2.0 * k + n) / spec.R, spec.delta); });
}

HermiteSlice dilate_slice(const HermiteSlice& slice, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("dilation factor must be positive");
  const double f = std::pow(s, -0.25 * slice.dim());
  HermiteSlice out(slice.dim(), slice.truncation(), slice.lambda() * s);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f * slice[i];
  return out;
}

// ---------------------------------------------------------------------------
// Maximal function

std::vector<std::size_t> reflection_indices(const TensorGrid& grid) {
  const std::size_t N = grid.points_per_axis();
  std::vector<std::size_t> out(grid.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::size_t rest = p, q = 0, stride = 1;
    for (int a = 0; a < grid.n; ++a) {
      const std::size_t i = rest % N;
      rest /= N;
      q += ((N - i) % N) * stride;
      stride *= N;
    }
    out[p] = q;
  }
  return out;
}

MaximalProfile hardy_littlewood_maximal(std::span<const double> g, const TensorGrid& grid) {
  const int n = grid.n;
  const auto N = static_cast<long>(grid.points_per_axis());
  if (g.size() != grid.size()) throw DomainError("maximal function input does not match the grid");
  for (double v : g)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("maximal function input must be finite and non-negative");
  const double h = grid.nodes.size() > 1 ? grid.nodes[1] - grid.nodes[0] : 1.0;
  const std::size_t lines = g.size() / static_cast<std::size_t>(N);

  // prefix[line * (N+1) + i] = sum of the first i entries of the axis-1 line.
  std::vector<double> prefix(lines * static_cast<std::size_t>(N + 1), 0.0);
  for (std::size_t l = 0; l < lines; ++l)
    for (long i = 0; i < N; ++i)
      prefix[l * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(i + 1)] =
          prefix[l * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(i)] + g[l * static_cast<std::size_t>(N) + static_cast<std::size_t>(i)];

  MaximalProfile out;
  out.values.assign(g.begin(), g.end());
  const double diameter = static_cast<double>(N) * h * std::sqrt(static_cast<double>(n));

  for (int level = -1;; ++level) {
    const double r = h * std::ldexp(1.0, level);
    out.radii_used.push_back(r);
    const long reach = static_cast<long>(std::floor(r / h + 1e-9));

    // Offsets on axes 2..n with the half-width of the axis-1 row they carry.
    struct Row {
      std::array<long, kMaxDim> d{};
      long w = 0;
    };
    std::vector<Row> rows;
    double count = 0.0;
    std::array<long, kMaxDim> d{};
    for (int a = 1; a < n; ++a) d[static_cast<std::size_t>(a)] = -reach;
    while (true) {
      double d2 = 0.0;
      for (int a = 1; a < n; ++a) d2 += static_cast<double>(d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(a)]);
      const double rem = (r / h) * (r / h) - d2;
      if (rem >= -1e-9) {
        Row row;
        row.d = d;
        row.w = static_cast<long>(std::floor(std::sqrt(std::max(rem, 0.0)) + 1e-9));
        rows.push_back(row);
        count += static_cast<double>(2 * row.w + 1);
      }
      int a = 1;
      for (; a < n; ++a) {
        auto& v = d[static_cast<std::size_t>(a)];
        if (++v <= reach) break;
        v = -reach;
      }
      if (a >= n) break;
    }

    parallel_for(lines, [&](std::size_t line) {
      std::array<long, kMaxDim> outer{};
      std::size_t rest = line;
      for (int a = 1; a < n; ++a) {
        outer[static_cast<std::size_t>(a)] = static_cast<long>(rest % static_cast<std::size_t>(N));
        rest /= static_cast<std::size_t>(N);
      }
      for (long i = 0; i < N; ++i) {
        double sum = 0.0;
        for (const auto& row : rows) {
          std::size_t target = 0, stride = 1;
          bool inside = true;
          for (int a = 1; a < n; ++a) {
            const long c = outer[static_cast<std::size_t>(a)] + row.d[static_cast<std::size_t>(a)];
            if (c < 0 || c >= N) {
              inside = false;
              break;
            }
            target += static_cast<std::size_t>(c) * stride;
            stride *= static_cast<std::size_t>(N);
          }
          if (!inside) continue;
          const long lo = std::max(i - row.w, 0L), hi = std::min(i + row.w, N - 1);
          if (lo > hi) continue;
          const double* p = prefix.data() + target * static_cast<std::size_t>(N + 1);
          sum += p[hi + 1] - p[lo];
        }
        auto& v = out.values[line * static_cast<std::size_t>(N) + static_cast<std::size_t>(i)];
        v = std::max(v, sum / count);
      }
    });
    if (r >= diameter) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domination check

std::vector<double> default_r_set(int n, int K, double lambda, int per_decade) {
  const double a = std::abs(lambda);
  const double lo = n * a, hi = (4.0 * K + n) * a;
  if (!(hi > lo)) return {lo};
  const int count = static_cast<int>(std::ceil(per_decade * std::log10(hi / lo))) + 1;
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return r;
}

namespace {

struct FamilyRatios {
  double two_sided = 0.0;
  double one_sided = 0.0;
};

// Per-degree synthesized components P_k f on the grid, combined per R.
FamilyRatios domination_ratios(const HermiteSlice& f, double delta, const TensorGrid& grid, const std::vector<double>& r_set,
                               const std::vector<double>& Mf, const std::vector<std::size_t>& refl) {
  const int K = f.truncation();
  const int n = f.dim();
  const double lam = std::abs(f.lambda());
  const std::size_t P = grid.size();
  std::vector<std::vector<cplx>> blocks(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    HermiteSlice part(n, K, f.lambda());
    for (std::size_t i = f.layout().degree_begin(k); i < f.layout().degree_end(k); ++i) part[i] = f[i];
    blocks[static_cast<std::size_t>(k)] = synthesize_on_grid(part, grid);
  }
  std::vector<double> sup(P, 0.0);
  std::vector<cplx> acc(P);
  for (double R : r_set) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (int k = 0; k <= K; ++k) {
      const double w = truncated_power((2.0 * k + n) * lam / R, delta);
      if (w == 0.0) continue;
      const auto& b = blocks[static_cast<std::size_t>(k)];
      for (std::size_t p = 0; p < P; ++p) acc[p] += w * b[p];
    }
    for (std::size_t p = 0; p < P; ++p) sup[p] = std::max(sup[p], std::abs(acc[p]));
  }
  FamilyRatios out;
  for (std::size_t p = 0; p < P; ++p) {
    const double dom = Mf[p] + Mf[refl[p]];
    if (dom < 1e-14 && sup[p] < 1e-14) continue;
    out.two_sided = std::max(out.two_sided, sup[p] / dom);
    if (!(Mf[p] < 1e-14 && sup[p] < 1e-14)) out.one_sided = std::max(out.one_sided, sup[p] / Mf[p]);
  }
  return out;
}

}  // namespace

DominationReport maximal_domination_check(std::span<const HermiteSlice> family, double delta, const TensorGrid& grid,
                                          std::vector<double> r_set) {
  if (family.empty()) throw DomainError("domination check needs at least one function");
  if (!(delta >= 0.0)) throw DomainError("Bochner-Riesz order delta must be non-negative");
  const int n = family[0].dim();
  const double lambda = family[0].lambda();
  for (const auto& f : family)
    if (f.dim() != n || f.lambda() != lambda) throw DomainError("domination family must share dimension and lambda");
  if (grid.n != n) throw DomainError("grid dimension does not match the family");

  int K = 0;
  for (const auto& f : family) K = std::max(K, f.truncation());
  DominationReport rep;
  rep.delta = delta;
  rep.lambda = lambda;
  rep.family_size = family.size();
  rep.r_set = r_set.empty() ? default_r_set(n, K, lambda) : std::move(r_set);
  std::sort(rep.r_set.begin(), rep.r_set.end());
  if (rep.r_set.front() <= 0.0) throw DomainError("thresholds R must be positive");
  const std::vector<double> refined = densify(rep.r_set);
  rep.above_critical = delta > 0.5 * (n - 1) + 1.0 / 6.0;

  const auto refl = reflection_indices(grid);
  std::vector<FamilyRatios> base(family.size()), fine(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    const std::vector<cplx> values = synthesize_on_grid(family[i], grid);
    std::vector<double> absf(values.size());
    for (std::size_t p = 0; p < values.size(); ++p) absf[p] = std::abs(values[p]);
    const auto Mf = hardy_littlewood_maximal(absf, grid).values;
    base[i] = domination_ratios(family[i], delta, grid, rep.r_set, Mf, refl);
    fine[i] = domination_ratios(family[i], delta, grid, refined, Mf, refl);
  });
  for (std::size_t i = 0; i < family.size(); ++i) {
    rep.c_emp = std::max(rep.c_emp, base[i].two_sided);
    rep.one_sided = std::max(rep.one_sided, base[i].one_sided);
    rep.c_emp_refined = std::max(rep.c_emp_refined, fine[i].two_sided);
  }
  rep.relative_change = rep.c_emp > 0.0 ? std::abs(rep.c_emp_refined - rep.c_emp) / rep.c_emp : 0.0;
  rep.stable = std::isfinite(rep.c_emp) && rep.relative_change < 0.25;
  return rep;
}

}  // namespace grushin
