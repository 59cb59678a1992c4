#include "mmfield/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "mmfield/errors.hpp"

namespace mmf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_marginals(const Matrix& cost, std::span<const double> mu,
                     std::span<const double> nu) {
  if (cost.rows != mu.size() || cost.cols != nu.size())
    throw InvalidInput("cost matrix shape does not match the marginals");
  if (mu.empty() || nu.empty()) throw InvalidInput("empty marginal");
  double smu = 0.0, snu = 0.0;
  for (double v : mu) {
    if (v < 0) throw InvalidInput("negative marginal entry");
    smu += v;
  }
  for (double v : nu) {
    if (v < 0) throw InvalidInput("negative marginal entry");
    snu += v;
  }
  if (smu <= 0 || snu <= 0) throw InfeasibleProblem("marginal with zero total mass");
  if (std::abs(smu - snu) > kMarginalTol)
    throw InfeasibleProblem("marginal masses differ beyond tolerance");
}

std::vector<double> normalized(std::span<const double> w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out(w.begin(), w.end());
  for (double& v : out) v /= s;
  return out;
}

// Min-cost transportation by successive shortest paths with potentials.
// Sources 0..n-1, sinks n..n+m-1; forward arcs are uncapacitated, backward
// residual arcs carry the current flow. Each augmentation follows a
// Dijkstra-shortest path in reduced costs, which stay non-negative, so the
// final plan is optimal. Costs must be non-negative.
class MinCostTransport {
 public:
  MinCostTransport(const Matrix& cost, std::span<const double> mu,
                   std::span<const double> nu)
      : n_(mu.size()),
        m_(nu.size()),
        cost_(cost),
        surplus_(mu.begin(), mu.end()),
        deficit_(nu.begin(), nu.end()),
        flow_(n_, m_),
        potential_(n_ + m_, 0.0) {}

  Matrix solve() {
    constexpr double stop_eps = 1e-12;
    constexpr double active_eps = 1e-15;
    double remaining = std::accumulate(surplus_.begin(), surplus_.end(), 0.0);
    std::size_t guard = 0;
    const std::size_t guard_limit = 4 * (n_ + m_) * (n_ + m_) + 64;
    while (remaining > stop_eps) {
      if (++guard > guard_limit)
        throw ValidationFailed("transport solver failed to converge");
      const auto [sink, dist] = dijkstra(active_eps);
      if (sink == npos)
        throw InfeasibleProblem("no augmenting path in transport network");
      // Distances capped at the target's keep every residual reduced cost
      // non-negative, unreached nodes included.
      for (std::size_t v = 0; v < n_ + m_; ++v)
        potential_[v] += std::min(dist_[v], dist);
      remaining -= augment(sink, active_eps);
    }
    return std::move(flow_);
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::pair<std::size_t, double> dijkstra(double active_eps) {
    dist_.assign(n_ + m_, kInf);
    parent_.assign(n_ + m_, npos);
    done_.assign(n_ + m_, false);
    for (std::size_t i = 0; i < n_; ++i)
      if (surplus_[i] > active_eps) dist_[i] = 0.0;
    for (;;) {
      std::size_t u = npos;
      double best = kInf;
      for (std::size_t v = 0; v < n_ + m_; ++v)
        if (!done_[v] && dist_[v] < best) {
          best = dist_[v];
          u = v;
        }
      if (u == npos) return {npos, kInf};
      done_[u] = true;
      if (u >= n_ && deficit_[u - n_] > active_eps) return {u, dist_[u]};
      if (u < n_) {
        // forward arcs u -> sink j
        for (std::size_t j = 0; j < m_; ++j) {
          const double rc =
              cost_.at(u, j) + potential_[u] - potential_[n_ + j];
          const double cand = dist_[u] + std::max(rc, 0.0);
          if (cand < dist_[n_ + j]) {
            dist_[n_ + j] = cand;
            parent_[n_ + j] = u;
          }
        }
      } else {
        // backward arcs (u = sink j) -> source i, available where flow > 0
        const std::size_t j = u - n_;
        for (std::size_t i = 0; i < n_; ++i) {
          if (flow_.at(i, j) <= 0.0) continue;
          const double rc =
              -cost_.at(i, j) + potential_[u] - potential_[i];
          const double cand = dist_[u] + std::max(rc, 0.0);
          if (cand < dist_[i]) {
            dist_[i] = cand;
            parent_[i] = u;
          }
        }
      }
    }
  }

  double augment(std::size_t sink, double active_eps) {
    // Trace back to the path's origin and find the bottleneck.
    double amount = deficit_[sink - n_];
    std::size_t v = sink;
    while (true) {
      const std::size_t u = parent_[v];
      if (v < n_ && u != npos) amount = std::min(amount, flow_.at(v, u - n_));
      if (u == npos) {
        amount = std::min(amount, surplus_[v]);
        break;
      }
      v = u;
    }
    (void)active_eps;
    const std::size_t origin = v;
    v = sink;
    while (parent_[v] != npos) {
      const std::size_t u = parent_[v];
      if (v >= n_)
        flow_.at(u, v - n_) += amount;  // forward arc u(source) -> v(sink)
      else
        flow_.at(v, u - n_) -= amount;  // backward arc along (v(source), u(sink))
      v = u;
    }
    surplus_[origin] -= amount;
    deficit_[sink - n_] -= amount;
    return amount;
  }

  std::size_t n_, m_;
  const Matrix& cost_;
  std::vector<double> surplus_, deficit_;
  Matrix flow_;
  std::vector<double> potential_;
  std::vector<double> dist_;
  std::vector<std::size_t> parent_;
  std::vector<char> done_;
};

// Dinic max-flow specialized to the bipartite feasibility network:
// source -> rows (cap mu), allowed row->col arcs (uncapacitated),
// cols -> sink (cap nu).
class FeasibilityFlow {
 public:
  FeasibilityFlow(std::span<const char> allowed, std::span<const double> mu,
                  std::span<const double> nu)
      : n_(mu.size()), m_(nu.size()) {
    const std::size_t nodes = n_ + m_ + 2;
    source_ = n_ + m_;
    sink_ = n_ + m_ + 1;
    head_.assign(nodes, -1);
    for (std::size_t i = 0; i < n_; ++i) add_edge(source_, i, mu[i]);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (allowed[i * m_ + j]) add_edge(i, n_ + j, kInf);
    for (std::size_t j = 0; j < m_; ++j) add_edge(n_ + j, sink_, nu[j]);
  }

  double max_flow() {
    double total = 0.0;
    while (bfs()) {
      iter_ = head_;
      for (;;) {
        const double pushed = dfs(source_, kInf);
        if (pushed <= 0) break;
        total += pushed;
      }
    }
    return total;
  }

  Matrix plan() const {
    Matrix p(n_, m_);
    for (std::size_t i = 0; i < n_; ++i)
      for (int e = head_[i]; e != -1; e = next_[e])
        if (to_[e] != static_cast<int>(source_) && !(e & 1))
          p.at(i, static_cast<std::size_t>(to_[e]) - n_) = flow_[e];
    return p;
  }

 private:
  void add_edge(std::size_t u, std::size_t v, double cap) {
    to_.push_back(static_cast<int>(v));
    cap_.push_back(cap);
    flow_.push_back(0.0);
    next_.push_back(head_[u]);
    head_[u] = static_cast<int>(to_.size()) - 1;
    to_.push_back(static_cast<int>(u));
    cap_.push_back(0.0);
    flow_.push_back(0.0);
    next_.push_back(head_[v]);
    head_[v] = static_cast<int>(to_.size()) - 1;
  }

  double residual(int e) const { return cap_[e] - flow_[e]; }

  bool bfs() {
    level_.assign(head_.size(), -1);
    queue_.clear();
    queue_.push_back(static_cast<int>(source_));
    level_[source_] = 0;
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      const int u = queue_[q];
      for (int e = head_[u]; e != -1; e = next_[e]) {
        if (residual(e) > kResidualEps && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          queue_.push_back(to_[e]);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  double dfs(std::size_t u, double limit) {
    if (u == sink_) return limit;
    for (int& e = iter_[u]; e != -1; e = next_[e]) {
      const int v = to_[e];
      if (residual(e) <= kResidualEps || level_[v] != level_[u] + 1) continue;
      const double pushed = dfs(v, std::min(limit, residual(e)));
      if (pushed > 0) {
        flow_[e] += pushed;
        flow_[e ^ 1] -= pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  static constexpr double kResidualEps = 1e-14;
  std::size_t n_, m_, source_, sink_;
  std::vector<int> head_, next_, to_;
  std::vector<double> cap_, flow_;
  std::vector<int> level_, iter_;
  std::vector<int> queue_;
};

}  // namespace

std::vector<double> Coupling::row_marginal() const {
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out[i] += p.at(i, j);
  return out;
}

std::vector<double> Coupling::col_marginal() const {
  std::vector<double> out(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out[j] += p.at(i, j);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Coupling::support(double eps) const {
  std::vector<std::pair<std::size_t, std::size_t>> s;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (p.at(i, j) > eps) s.emplace_back(i, j);
  return s;
}

double Coupling::marginal_error(std::span<const double> mu,
                                std::span<const double> nu) const {
  double err = 0.0;
  const auto rm = row_marginal();
  const auto cm = col_marginal();
  for (std::size_t i = 0; i < rows(); ++i) err = std::max(err, std::abs(rm[i] - mu[i]));
  for (std::size_t j = 0; j < cols(); ++j) err = std::max(err, std::abs(cm[j] - nu[j]));
  for (double v : p.v) err = std::max(err, -v);
  return err;
}

TransportResult wasserstein_p(const Matrix& cost, std::span<const double> mu,
                              std::span<const double> nu, double p) {
  if (!(p >= 1.0) || std::isinf(p))
    throw InvalidInput("wasserstein_p needs a finite p >= 1");
  check_marginals(cost, mu, nu);
  for (double c : cost.v)
    if (c < 0) throw InvalidInput("negative transport cost");

  const auto mu_n = normalized(mu);
  const auto nu_n = normalized(nu);

  double cmax = 0.0;
  for (double c : cost.v) cmax = std::max(cmax, c);
  Matrix powered(cost.rows, cost.cols);
  if (cmax > 0)
    for (std::size_t k = 0; k < cost.v.size(); ++k)
      powered.v[k] = std::pow(cost.v[k] / cmax, p);

  MinCostTransport solver(powered, mu_n, nu_n);
  Matrix flow = solver.solve();
  for (double& f : flow.v)
    if (f < 0) f = 0.0;  // clamp augmentation round-off

  double obj = 0.0;
  for (std::size_t k = 0; k < flow.v.size(); ++k) obj += flow.v[k] * powered.v[k];
  const double value = cmax > 0 ? cmax * std::pow(std::max(obj, 0.0), 1.0 / p) : 0.0;
  return {value, Coupling{std::move(flow)}};
}

TransportResult wasserstein_inf(const Matrix& cost, std::span<const double> mu,
                                std::span<const double> nu, double support_eps) {
  check_marginals(cost, mu, nu);
  const auto mu_n = normalized(mu);
  const auto nu_n = normalized(nu);
  const std::size_t n = mu_n.size(), m = nu_n.size();

  // Candidate thresholds: cost values on cells both of whose marginals
  // carry mass. Feasibility only changes at these.
  std::vector<double> levels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (mu_n[i] > 0 && nu_n[j] > 0) levels.push_back(cost.at(i, j));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty()) throw InfeasibleProblem("no usable transport cell");

  std::vector<char> allowed(n * m, 0);
  const auto feasible_at = [&](double t) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        allowed[i * m + j] = cost.at(i, j) <= t;
    FeasibilityFlow net(allowed, mu_n, nu_n);
    return net.max_flow() >= 1.0 - 1e-10;
  };

  std::size_t lo = 0, hi = levels.size() - 1;
  if (!feasible_at(levels[hi]))
    throw InfeasibleProblem("transport infeasible even on the full support");
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible_at(levels[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  const double value = levels[lo];

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      allowed[i * m + j] = cost.at(i, j) <= value;
  FeasibilityFlow net(allowed, mu_n, nu_n);
  net.max_flow();
  Matrix plan = net.plan();
  for (double& f : plan.v)
    if (f < support_eps) f = std::max(f, 0.0);
  return {value, Coupling{std::move(plan)}};
}

bool support_feasible(std::span<const char> allowed, std::span<const double> mu,
                      std::span<const double> nu) {
  if (allowed.size() != mu.size() * nu.size())
    throw InvalidInput("allowed mask has wrong shape");
  const auto mu_n = normalized(mu);
  const auto nu_n = normalized(nu);
  FeasibilityFlow net(allowed, mu_n, nu_n);
  return net.max_flow() >= 1.0 - 1e-10;
}

Coupling fill_support(std::span<const char> allowed, std::span<const double> mu,
                      std::span<const double> nu) {
  const auto mu_n = normalized(mu);
  const auto nu_n = normalized(nu);
  FeasibilityFlow net(allowed, mu_n, nu_n);
  if (net.max_flow() < 1.0 - 1e-10)
    throw InfeasibleProblem("support pattern admits no coupling");
  Matrix plan = net.plan();
  for (double& f : plan.v)
    if (f < 0) f = 0.0;
  return Coupling{std::move(plan)};
}

std::vector<Coupling> enumerate_extreme_couplings(std::span<const double> mu,
                                                  std::span<const double> nu,
                                                  std::size_t max_n) {
  const std::size_t n = mu.size(), m = nu.size();
  if (n == 0 || m == 0) throw InvalidInput("empty marginal");
  if (n > max_n || m > max_n)
    throw SizeLimitExceeded("vertex enumeration beyond its size limit");
  {
    Matrix dummy(n, m);
    check_marginals(dummy, mu, nu);
  }
  const auto mu_n = normalized(mu);
  const auto nu_n = normalized(nu);

  // Vertices are basic solutions: flows supported on a spanning tree of the
  // complete bipartite graph. Enumerate all edge subsets of size n+m-1,
  // keep the acyclic ones, solve by leaf elimination, keep non-negative.
  const std::size_t arcs = n * m;
  const std::size_t tree_size = n + m - 1;
  std::vector<std::size_t> pick(tree_size);
  std::vector<Coupling> out;
  std::vector<std::vector<std::int64_t>> seen;

  std::vector<std::size_t> uf(n + m);
  const auto uf_find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };

  const auto try_tree = [&]() {
    std::iota(uf.begin(), uf.end(), 0);
    for (std::size_t a : pick) {
      const std::size_t u = a / m, v = n + a % m;
      const std::size_t ru = uf_find(u), rv = uf_find(v);
      if (ru == rv) return;  // cycle
      uf[ru] = rv;
    }
    // Leaf elimination on the tree.
    std::vector<double> b(n + m);
    for (std::size_t i = 0; i < n; ++i) b[i] = mu_n[i];
    for (std::size_t j = 0; j < m; ++j) b[n + j] = -nu_n[j];
    std::vector<std::size_t> degree(n + m, 0);
    for (std::size_t a : pick) {
      ++degree[a / m];
      ++degree[n + a % m];
    }
    std::vector<char> arc_done(tree_size, 0);
    std::vector<double> x(tree_size, 0.0);
    bool progress = true;
    std::size_t remaining = tree_size;
    while (remaining > 0 && progress) {
      progress = false;
      for (std::size_t t = 0; t < tree_size; ++t) {
        if (arc_done[t]) continue;
        const std::size_t i = pick[t] / m, j = n + pick[t] % m;
        std::size_t leaf, other;
        if (degree[i] == 1) {
          leaf = i;
          other = j;
        } else if (degree[j] == 1) {
          leaf = j;
          other = i;
        } else {
          continue;
        }
        x[t] = leaf < n ? b[leaf] : -b[leaf];
        b[other] += b[leaf];
        b[leaf] = 0;
        --degree[leaf];
        --degree[other];
        arc_done[t] = 1;
        --remaining;
        progress = true;
      }
    }
    for (double f : x)
      if (f < -1e-11) return;  // infeasible basic solution

    Matrix plan(n, m);
    for (std::size_t t = 0; t < tree_size; ++t)
      plan.at(pick[t] / m, pick[t] % m) = std::max(x[t], 0.0);
    std::vector<std::int64_t> key(arcs);
    for (std::size_t k = 0; k < arcs; ++k)
      key[k] = std::llround(plan.v[k] * 1e12);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    seen.push_back(std::move(key));
    out.push_back(Coupling{std::move(plan)});
  };

  // All C(arcs, tree_size) combinations in lexicographic order.
  for (std::size_t t = 0; t < tree_size; ++t) pick[t] = t;
  for (;;) {
    try_tree();
    std::size_t t = tree_size;
    while (t > 0 && pick[t - 1] == arcs - tree_size + (t - 1)) --t;
    if (t == 0) break;
    ++pick[t - 1];
    for (std::size_t s = t; s < tree_size; ++s) pick[s] = pick[s - 1] + 1;
  }

  std::sort(out.begin(), out.end(), [](const Coupling& a, const Coupling& b) {
    return a.p.v < b.p.v;
  });
  return out;
}

}  // namespace mmf
