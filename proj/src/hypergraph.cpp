#include "mmfield/hypergraph.hpp"

#include <algorithm>
#include <cmath>

#include "mmfield/errors.hpp"

namespace mmf {

namespace {

std::vector<std::vector<char>> proximity_graph(const FiniteMetric& m, double r) {
  const std::size_t n = m.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) <= r) adj[i][j] = 1;
  return adj;
}

// Bron-Kerbosch with pivoting. Sets are kept as sorted index vectors; the
// pivot is the candidate dominating the most of P.
void bron_kerbosch(const std::vector<std::vector<char>>& adj,
                   std::vector<std::size_t>& r, std::vector<std::size_t> p,
                   std::vector<std::size_t> x,
                   std::vector<std::vector<std::size_t>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    std::sort(out.back().begin(), out.back().end());
    return;
  }
  std::size_t pivot = 0, pivot_score = 0;
  bool have_pivot = false;
  for (const auto* set : {&p, &x})
    for (std::size_t u : *set) {
      std::size_t score = 0;
      for (std::size_t v : p) score += adj[u][v];
      if (!have_pivot || score > pivot_score) {
        have_pivot = true;
        pivot = u;
        pivot_score = score;
      }
    }
  std::vector<std::size_t> branch;
  for (std::size_t v : p)
    if (!adj[pivot][v]) branch.push_back(v);
  for (std::size_t v : branch) {
    std::vector<std::size_t> p2, x2;
    for (std::size_t w : p)
      if (adj[v][w]) p2.push_back(w);
    for (std::size_t w : x)
      if (adj[v][w]) x2.push_back(w);
    r.push_back(v);
    bron_kerbosch(adj, r, std::move(p2), std::move(x2), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> maximal_cliques_bruteforce(
    const FiniteMetric& m, double r) {
  const std::size_t n = m.size();
  if (n > 12) throw SizeLimitExceeded("brute-force clique oracle limited to n <= 12");
  const auto adj = proximity_graph(m, r);

  const auto is_clique = [&](unsigned mask) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if ((mask >> j & 1) && !adj[i][j]) return false;
    }
    return true;
  };

  std::vector<unsigned> cliques;
  for (unsigned mask = 1; mask < (1u << n); ++mask)
    if (is_clique(mask)) cliques.push_back(mask);

  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask : cliques) {
    bool maximal = true;
    for (unsigned other : cliques)
      if (other != mask && (mask & other) == mask) {
        maximal = false;
        break;
      }
    if (!maximal) continue;
    std::vector<std::size_t> simplex;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) simplex.push_back(i);
    out.push_back(std::move(simplex));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CommunityHypergraph build_hypergraph(const FiniteMetric& m, double r,
                                     std::span<const double> p_list) {
  if (r < 0) throw InvalidInput("scale must be non-negative");
  for (double p : p_list)
    if (!(p >= 1.0) || std::isinf(p))
      throw InvalidInput("centrality exponents must be finite and >= 1");

  const std::size_t n = m.size();
  const auto adj = proximity_graph(m, r);
  std::vector<std::vector<std::size_t>> simplices;
  {
    std::vector<std::size_t> base, candidates(n);
    for (std::size_t i = 0; i < n; ++i) candidates[i] = i;
    bron_kerbosch(adj, base, std::move(candidates), {}, simplices);
  }
  std::sort(simplices.begin(), simplices.end());

  const std::size_t s = simplices.size();
  std::size_t total = 0;  // N = sum of simplex sizes, exact in integers
  for (const auto& sigma : simplices) total += sigma.size();
  std::vector<double> measure(s);
  for (std::size_t i = 0; i < s; ++i)
    measure[i] = static_cast<double>(simplices[i].size()) / static_cast<double>(total);

  std::vector<double> dh(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) {
      const double d = hausdorff(m, simplices[i], simplices[j]);
      dh[i * s + j] = d;
      dh[j * s + i] = d;
    }
  FiniteMetric metric = FiniteMetric::from_flat(s, std::move(dh));

  Matrix centrality(p_list.size(), s);
  const double scale = metric.diameter();
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    const double p = p_list[pi];
    for (std::size_t i = 0; i < s; ++i) {
      double acc = 0.0;
      if (scale > 0)
        for (std::size_t j = 0; j < s; ++j)
          acc += std::pow(metric(i, j) / scale, p) *
                 static_cast<double>(simplices[j].size());
      centrality.at(pi, i) =
          scale * std::pow(acc / static_cast<double>(total), 1.0 / p);
    }
  }

  CommunityHypergraph h;
  h.base = m;
  h.scale = r;
  h.simplices = std::move(simplices);
  h.metric = std::move(metric);
  h.measure = std::move(measure);
  h.p_list.assign(p_list.begin(), p_list.end());
  h.centrality = std::move(centrality);
  return h;
}

MMField hypergraph_to_field(const CommunityHypergraph& h, double p) {
  const auto it = std::find(h.p_list.begin(), h.p_list.end(), p);
  if (it == h.p_list.end())
    throw InvalidInput("centrality exponent was not requested at build time");
  const std::size_t pi = static_cast<std::size_t>(it - h.p_list.begin());

  MMField f;
  f.metric = h.metric;
  f.measure = h.measure;
  f.target = TargetSpace::euclidean(1);
  f.values.reserve(h.simplices.size());
  for (std::size_t i = 0; i < h.simplices.size(); ++i)
    f.values.push_back(std::vector<double>{h.centrality.at(pi, i)});

  // lambda_p is 1-Lipschitz for d_H (Minkowski), but guard the emitted field
  // rather than assume it.
  const auto report = validate_field(f);
  if (!report.ok())
    throw ValidationFailed("hypergraph field failed validation: " + report.to_string());
  return f;
}

}  // namespace mmf
