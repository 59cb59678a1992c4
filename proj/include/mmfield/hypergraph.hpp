#pragma once

#include <span>
#include <vector>

#include "mmfield/field.hpp"
#include "mmfield/matrix.hpp"
#include "mmfield/metric.hpp"

namespace mmf {

/// The community hypergraph of a finite metric at scale r: the maximal
/// cliques of the proximity graph (d <= r), metrized by Hausdorff distance,
/// weighted by mu(sigma) = |sigma| / sum |tau|, with p-centrality values
/// lambda_p(sigma) = (sum_tau mu(tau) d_H(sigma,tau)^p)^(1/p).
struct CommunityHypergraph {
  FiniteMetric base;
  double scale = 0.0;
  std::vector<std::vector<std::size_t>> simplices;  // sorted, lexicographic order
  FiniteMetric metric;          // pairwise Hausdorff between simplices
  std::vector<double> measure;  // |sigma| / N, N = sum of sizes
  std::vector<double> p_list;
  Matrix centrality;            // centrality.at(p_index, simplex_index)
};

/// Builds the community hypergraph. Simplices are enumerated with pivoting
/// Bron-Kerbosch, emitted as sorted index sets in lexicographic order.
CommunityHypergraph build_hypergraph(const FiniteMetric& m, double r,
                                     std::span<const double> p_list);

/// Views the hypergraph as a field into the real line: metric d_H, measure
/// mu, values lambda_p. Throws InvalidInput if p was not requested at build
/// time; throws ValidationFailed if the result fails field validation.
MMField hypergraph_to_field(const CommunityHypergraph& h, double p);

/// Exhaustive-maximality oracle (all subsets). Limited to n <= 12 points.
std::vector<std::vector<std::size_t>> maximal_cliques_bruteforce(
    const FiniteMetric& m, double r);

}  // namespace mmf
