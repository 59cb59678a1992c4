#include "mmfield/gw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmfield/errors.hpp"
#include "mmfield/rng.hpp"

namespace mmf {

namespace {

constexpr double kTieEps = 0.0;  // exact ties only; candidate order breaks the rest

// Support cells of a mask over the active cell list, as (i,j) pairs in
// row-major order. Used for the deterministic lexicographic tie-break.
std::vector<std::pair<std::size_t, std::size_t>> mask_cells(
    std::uint64_t mask, const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (mask >> k & 1) out.push_back(cells[k]);
  return out;
}

double sup_objective_over(const std::vector<std::pair<std::size_t, std::size_t>>& cells,
                          const FieldPairCosts& costs) {
  double best = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    best = std::max(best, costs.db.at(cells[a].first, cells[a].second));
    for (std::size_t b = a; b < cells.size(); ++b)
      best = std::max(best, 0.5 * costs.m(cells[a].first, cells[a].second,
                                           cells[b].first, cells[b].second));
  }
  return best;
}

struct PowerTerms {
  double m_term;   // 1/2 (int m^p dPxP)^(1/p)
  double db_term;  // (int dB^p dP)^(1/p)
};

PowerTerms power_terms(const Coupling& plan, const FieldPairCosts& costs, double p) {
  const std::size_t nx = costs.nx(), ny = costs.ny();
  double mmax = 0.0, dmax = 0.0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      dmax = std::max(dmax, costs.db.at(i, j));
      for (std::size_t i2 = 0; i2 < nx; ++i2)
        for (std::size_t j2 = 0; j2 < ny; ++j2)
          mmax = std::max(mmax, costs.m(i, j, i2, j2));
    }
  double sm = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double pij = plan.at(i, j);
      if (pij <= 0) continue;
      if (dmax > 0) sd += pij * std::pow(costs.db.at(i, j) / dmax, p);
      if (mmax > 0)
        for (std::size_t i2 = 0; i2 < nx; ++i2)
          for (std::size_t j2 = 0; j2 < ny; ++j2) {
            const double q = plan.at(i2, j2);
            if (q <= 0) continue;
            sm += pij * q * std::pow(costs.m(i, j, i2, j2) / mmax, p);
          }
    }
  PowerTerms t;
  t.m_term = mmax > 0 ? 0.5 * mmax * std::pow(sm, 1.0 / p) : 0.0;
  t.db_term = dmax > 0 ? dmax * std::pow(sd, 1.0 / p) : 0.0;
  return t;
}

// Solves min <g, S> over the transportation polytope; any linear transport
// objective works, so shift the gradient to non-negative costs.
Coupling linear_direction(const Matrix& grad, std::span<const double> mu,
                          std::span<const double> nu) {
  double lo = 0.0;
  for (double v : grad.v) lo = std::min(lo, v);
  Matrix shifted = grad;
  for (double& v : shifted.v) v -= lo;
  return wasserstein_p(shifted, mu, nu, 1.0).plan;
}

Coupling blend(const Coupling& a, const Coupling& b, double t) {
  Matrix p(a.p.rows, a.p.cols);
  for (std::size_t k = 0; k < p.v.size(); ++k)
    p.v[k] = (1.0 - t) * a.p.v[k] + t * b.p.v[k];
  return Coupling{std::move(p)};
}

// Independent product coupling mu x nu.
Coupling product_coupling(std::span<const double> mu, std::span<const double> nu) {
  Matrix p(mu.size(), nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) p.at(i, j) = mu[i] * nu[j];
  return Coupling{std::move(p)};
}

// Random positive matrix scaled to the prescribed marginals (Sinkhorn/IPF).
Coupling random_coupling(std::span<const double> mu, std::span<const double> nu,
                         const CounterRng& rng, std::uint64_t restart) {
  const std::size_t n = mu.size(), m = nu.size();
  Matrix w(n, m);
  for (std::size_t k = 0; k < n * m; ++k)
    w.v[k] = std::exp(2.0 * rng.uniform01(restart, k) - 1.0);
  for (std::size_t it = 0; it < 500; ++it) {
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += w.at(i, j);
      const double f = s > 0 ? mu[i] / s : 0.0;
      for (std::size_t j = 0; j < m; ++j) w.at(i, j) *= f;
    }
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += w.at(i, j);
      const double f = s > 0 ? nu[j] / s : 0.0;
      err = std::max(err, std::abs(s - nu[j]));
      for (std::size_t i = 0; i < n; ++i) w.at(i, j) *= f;
    }
    if (err < 1e-13) break;
  }
  return Coupling{std::move(w)};
}

bool lex_less(const std::vector<std::pair<std::size_t, std::size_t>>& a,
              const std::vector<std::pair<std::size_t, std::size_t>>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

FieldPairCosts FieldPairCosts::build(const MMField& fx, const MMField& fy) {
  if (!fx.target.same_space(fy.target))
    throw InvalidInput("fields live over different target spaces");
  FieldPairCosts c;
  c.dx = fx.metric;
  c.dy = fy.metric;
  c.db = Matrix(fx.size(), fy.size());
  for (std::size_t i = 0; i < fx.size(); ++i)
    for (std::size_t j = 0; j < fy.size(); ++j)
      c.db.at(i, j) = fx.target.distance(fx.values[i], fy.values[j]);
  return c;
}

double gw_objective(const Coupling& plan, const FieldPairCosts& costs, double p,
                    double support_eps) {
  if (plan.rows() != costs.nx() || plan.cols() != costs.ny())
    throw InvalidInput("coupling shape does not match the cost pair");
  if (std::isinf(p)) {
    return sup_objective_over(plan.support(support_eps), costs);
  }
  if (!(p >= 1.0)) throw InvalidInput("gw objective needs p >= 1");
  const auto t = power_terms(plan, costs, p);
  return std::max(t.m_term, t.db_term);
}

namespace {

GwResult gw_exact_inf(const MMField& fx, const MMField& fy,
                      const FieldPairCosts& costs, const GwOptions& opt) {
  const std::size_t nx = fx.size(), ny = fy.size();
  // Only cells whose row and column carry mass can appear in a support.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (fx.measure[i] > 0 && fy.measure[j] > 0) cells.emplace_back(i, j);
  if (cells.size() > opt.exact_cell_limit || cells.size() >= 63)
    throw SizeLimitExceeded("exact p=inf oracle beyond its cell limit");
  if (cells.empty()) throw InvalidInput("fields carry no mass");

  std::uint64_t row_bits_all = 0, col_bits_all = 0;
  std::vector<std::uint64_t> row_bit(cells.size()), col_bit(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    row_bit[k] = 1ull << cells[k].first;
    col_bit[k] = 1ull << cells[k].second;
  }
  for (std::size_t i = 0; i < nx; ++i)
    if (fx.measure[i] > 0) row_bits_all |= 1ull << i;
  for (std::size_t j = 0; j < ny; ++j)
    if (fy.measure[j] > 0) col_bits_all |= 1ull << j;

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, std::size_t>> best_support;
  std::vector<char> allowed(nx * ny);
  const std::uint64_t total = 1ull << cells.size();
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    std::uint64_t rb = 0, cb = 0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (mask >> k & 1) {
        rb |= row_bit[k];
        cb |= col_bit[k];
      }
    if (rb != row_bits_all || cb != col_bits_all) continue;  // cannot marginalize

    auto support = mask_cells(mask, cells);
    const double obj = sup_objective_over(support, costs);
    if (obj > best + kTieEps) continue;
    if (obj == best && !lex_less(support, best_support)) continue;

    std::fill(allowed.begin(), allowed.end(), 0);
    for (auto [i, j] : support) allowed[i * ny + j] = 1;
    if (!support_feasible(allowed, fx.measure, fy.measure)) continue;
    best = obj;
    best_support = std::move(support);
  }
  if (best_support.empty())
    throw ValidationFailed("no feasible support pattern found");

  std::fill(allowed.begin(), allowed.end(), 0);
  for (auto [i, j] : best_support) allowed[i * ny + j] = 1;
  GwResult res;
  res.value = best;
  res.coupling = fill_support(allowed, fx.measure, fy.measure);
  res.p = kInfiniteP;
  res.mode = GwMode::exact_oracle;
  res.error_bound = 0.0;
  res.search_size = static_cast<std::size_t>(total - 1);
  return res;
}

GwResult gw_exact_finite(const MMField& fx, const MMField& fy,
                         const FieldPairCosts& costs, double p,
                         const GwOptions& opt) {
  const auto vertices =
      enumerate_extreme_couplings(fx.measure, fy.measure, opt.vertex_max_n);
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  Coupling best_blend;
  std::vector<std::pair<std::size_t, std::size_t>> best_support;
  std::size_t examined = 0;

  const auto consider = [&](const Coupling& cand) {
    ++examined;
    const double obj = gw_objective(cand, costs, p, opt.support_eps);
    if (obj > best) return;
    auto support = cand.support(opt.support_eps);
    if (obj == best && !lex_less(support, best_support)) return;
    best = obj;
    best_support = std::move(support);
    best_blend = cand;
    found = true;
  };

  for (const auto& v : vertices) consider(v);
  // Grid along every segment between vertex pairs. The finite-p optimum need
  // not sit at a vertex; this refinement carries the reported Lipschitz
  // error bound.
  const double step = opt.grid_step;
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      for (double t = step; t < 1.0 - step / 2; t += step)
        consider(blend(vertices[a], vertices[b], t));

  if (!found) throw ValidationFailed("empty candidate set");
  const double diam = std::max(costs.dx.diameter(), costs.dy.diameter());
  GwResult res;
  res.value = best;
  res.coupling = best_blend;
  res.p = p;
  res.mode = GwMode::exact_oracle;
  res.error_bound = 4.0 * diam * step;
  res.search_size = examined;
  return res;
}

GwResult gw_local_search_finite(const MMField& fx, const MMField& fy,
                                const FieldPairCosts& costs, double p,
                                const GwOptions& opt) {
  const CounterRng rng(opt.seed);
  const std::vector<double>& mu = fx.measure;
  const std::vector<double>& nu = fy.measure;
  const std::size_t nx = mu.size(), ny = nu.size();

  double best = std::numeric_limits<double>::infinity();
  Coupling best_plan;

  for (std::size_t restart = 0; restart < std::max<std::size_t>(opt.restarts, 1);
       ++restart) {
    Coupling plan = restart == 0 ? product_coupling(mu, nu)
                                 : random_coupling(mu, nu, rng, restart);
    double obj = gw_objective(plan, costs, p, opt.support_eps);
    for (std::size_t iter = 0; iter < 60; ++iter) {
      const auto terms = power_terms(plan, costs, p);
      // Subgradient of the active branch of the max.
      Matrix grad(nx, ny, 0.0);
      const bool m_active = terms.m_term >= terms.db_term - 1e-14;
      const bool d_active = terms.db_term >= terms.m_term - 1e-14;
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
          double g = 0.0;
          if (m_active)
            for (std::size_t i2 = 0; i2 < nx; ++i2)
              for (std::size_t j2 = 0; j2 < ny; ++j2)
                g += std::pow(costs.m(i, j, i2, j2), p) * plan.at(i2, j2);
          if (d_active) g += std::pow(costs.db.at(i, j), p);
          grad.at(i, j) = g;
        }
      const Coupling dir = linear_direction(grad, mu, nu);

      // Line search on the true objective along the segment to the LP vertex.
      double t_best = 0.0, f_best = obj;
      for (int k = 1; k <= 32; ++k) {
        const double t = static_cast<double>(k) / 32.0;
        const double f = gw_objective(blend(plan, dir, t), costs, p, opt.support_eps);
        if (f < f_best) {
          f_best = f;
          t_best = t;
        }
      }
      double lo = std::max(0.0, t_best - 1.0 / 32), hi = std::min(1.0, t_best + 1.0 / 32);
      for (int k = 0; k < 30; ++k) {
        const double t1 = lo + (hi - lo) / 3, t2 = hi - (hi - lo) / 3;
        const double f1 = gw_objective(blend(plan, dir, t1), costs, p, opt.support_eps);
        const double f2 = gw_objective(blend(plan, dir, t2), costs, p, opt.support_eps);
        if (f1 < f2)
          hi = t2;
        else
          lo = t1;
        if (std::min(f1, f2) < f_best) {
          f_best = std::min(f1, f2);
          t_best = f1 < f2 ? t1 : t2;
        }
      }
      if (f_best >= obj - 1e-13) break;
      plan = blend(plan, dir, t_best);
      obj = f_best;
    }
    if (obj < best) {
      best = obj;
      best_plan = plan;
    }
  }

  GwResult res;
  res.value = best;
  res.coupling = std::move(best_plan);
  res.p = p;
  res.mode = GwMode::local_search;
  res.error_bound = std::numeric_limits<double>::infinity();
  res.search_size = 0;
  return res;
}

GwResult gw_local_search_inf(const MMField& fx, const MMField& fy,
                             const FieldPairCosts& costs, const GwOptions& opt) {
  const CounterRng rng(opt.seed);
  const std::size_t nx = fx.size(), ny = fy.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, std::size_t>> best_support;

  std::vector<char> allowed(nx * ny);
  const auto feasible = [&](const std::vector<std::pair<std::size_t, std::size_t>>& s) {
    std::fill(allowed.begin(), allowed.end(), 0);
    for (auto [i, j] : s) allowed[i * ny + j] = 1;
    return support_feasible(allowed, fx.measure, fy.measure);
  };

  for (std::size_t restart = 0; restart < std::max<std::size_t>(opt.restarts, 1);
       ++restart) {
    Coupling plan = restart == 0
                        ? product_coupling(fx.measure, fy.measure)
                        : random_coupling(fx.measure, fy.measure, rng, restart);
    auto support = plan.support(opt.support_eps);
    double obj = sup_objective_over(support, costs);
    // Greedy pruning: drop the heaviest-contributing cell while the pattern
    // still carries a coupling and the objective improves.
    for (;;) {
      std::vector<std::size_t> order(support.size());
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> contribution(support.size(), 0.0);
      for (std::size_t a = 0; a < support.size(); ++a) {
        contribution[a] = costs.db.at(support[a].first, support[a].second);
        for (std::size_t b = 0; b < support.size(); ++b)
          contribution[a] =
              std::max(contribution[a], 0.5 * costs.m(support[a].first, support[a].second,
                                                      support[b].first, support[b].second));
      }
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return contribution[a] > contribution[b];
      });
      bool improved = false;
      for (std::size_t a : order) {
        std::vector<std::pair<std::size_t, std::size_t>> trimmed;
        trimmed.reserve(support.size() - 1);
        for (std::size_t k = 0; k < support.size(); ++k)
          if (k != a) trimmed.push_back(support[k]);
        if (trimmed.empty()) continue;
        const double trimmed_obj = sup_objective_over(trimmed, costs);
        if (trimmed_obj >= obj) continue;
        if (!feasible(trimmed)) continue;
        support = std::move(trimmed);
        obj = trimmed_obj;
        improved = true;
        break;
      }
      if (!improved) break;
    }
    if (obj < best || (obj == best && lex_less(support, best_support))) {
      best = obj;
      best_support = support;
    }
  }

  std::fill(allowed.begin(), allowed.end(), 0);
  for (auto [i, j] : best_support) allowed[i * ny + j] = 1;
  GwResult res;
  res.value = best;
  res.coupling = fill_support(allowed, fx.measure, fy.measure);
  res.p = kInfiniteP;
  res.mode = GwMode::local_search;
  res.error_bound = std::numeric_limits<double>::infinity();
  res.search_size = 0;
  return res;
}

}  // namespace

GwResult gw_distance(const MMField& fx, const MMField& fy, double p, GwMode mode,
                     const GwOptions& opt) {
  if (!(p >= 1.0)) throw InvalidInput("gw_distance needs p >= 1 (or infinity)");
  const auto costs = FieldPairCosts::build(fx, fy);
  if (mode == GwMode::exact_oracle)
    return std::isinf(p) ? gw_exact_inf(fx, fy, costs, opt)
                         : gw_exact_finite(fx, fy, costs, p, opt);
  return std::isinf(p) ? gw_local_search_inf(fx, fy, costs, opt)
                       : gw_local_search_finite(fx, fy, costs, p, opt);
}

GluedField glue(const MMField& fx, const MMField& fy, const Coupling& plan,
                double weight_x, double support_eps) {
  if (!fx.target.same_space(fy.target))
    throw InvalidInput("glue needs fields over the same target space");
  if (plan.rows() != fx.size() || plan.cols() != fy.size())
    throw InvalidInput("coupling shape does not match the fields");
  if (!(weight_x > 0.0) || !(weight_x < 1.0))
    throw InvalidInput("glue weight must lie strictly between 0 and 1");
  const auto support = plan.support(support_eps);
  if (support.empty()) throw InvalidInput("glue coupling has empty support");

  const auto costs = FieldPairCosts::build(fx, fy);
  const double r = sup_objective_over(support, costs);

  const std::size_t n = fx.size(), m = fy.size(), nz = n + m;
  std::vector<double> d(nz * nz, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * nz + j] = fx.metric(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) d[(n + i) * nz + (n + j)] = fy.metric(i, j);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      double cross = std::numeric_limits<double>::infinity();
      for (auto [xs, ys] : support)
        cross = std::min(cross, fx.metric(x, xs) + fy.metric(y, ys));
      cross += r;
      d[x * nz + (n + y)] = cross;
      d[(n + y) * nz + x] = cross;
    }

  std::vector<double> mu(nz);
  for (std::size_t i = 0; i < n; ++i) mu[i] = weight_x * fx.measure[i];
  for (std::size_t j = 0; j < m; ++j) mu[n + j] = (1.0 - weight_x) * fy.measure[j];
  std::vector<TargetPoint> vals;
  vals.reserve(nz);
  vals.insert(vals.end(), fx.values.begin(), fx.values.end());
  vals.insert(vals.end(), fy.values.begin(), fy.values.end());

  GluedField out;
  out.field = MMField{FiniteMetric::from_flat(nz, std::move(d)), std::move(mu),
                      fx.target, std::move(vals)};
  out.r = r;
  return out;
}

EmbeddingBound embedding_bound_check(const MMField& fx, const MMField& fy,
                                     const Coupling& plan, double p,
                                     const GwOptions& opt) {
  const GluedField glued = glue(fx, fy, plan);
  const std::size_t n = fx.size(), m = fy.size();
  Matrix cross(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) cross.at(i, j) = glued.field.metric(i, n + j);

  EmbeddingBound out;
  out.lhs = gw_distance(fx, fy, p, GwMode::exact_oracle, opt).value;
  out.rhs = std::isinf(p)
                ? wasserstein_inf(cross, fx.measure, fy.measure, opt.support_eps).value
                : wasserstein_p(cross, fx.measure, fy.measure, p).value;
  out.ok = out.lhs <= out.rhs + 1e-8;
  return out;
}

double gw_uniform_certificate(const MMField& fx, const MMField& fy,
                              std::size_t seq_len, std::uint64_t seed,
                              const GwOptions& opt) {
  if (seq_len == 0) throw InvalidInput("certificate needs at least one draw");
  const auto costs = FieldPairCosts::build(fx, fy);
  const GwResult res = gw_distance(fx, fy, kInfiniteP, GwMode::exact_oracle, opt);
  const auto support = res.coupling.support(opt.support_eps);

  std::vector<double> cumulative(support.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    acc += res.coupling.at(support[k].first, support[k].second);
    cumulative[k] = acc;
  }

  const CounterRng rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> drawn(seq_len);
  for (std::size_t k = 0; k < seq_len; ++k)
    drawn[k] = support[rng.pick(cumulative, 0, k)];
  return sup_objective_over(drawn, costs);
}

}  // namespace mmf
