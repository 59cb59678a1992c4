#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mmfield/matrix.hpp"

namespace mmf {

/// Entries below this are not part of a coupling's support.
inline constexpr double kSupportEps = 1e-12;

/// Tolerance on coupling marginals.
inline constexpr double kMarginalTol = 1e-9;

/// A transport plan: non-negative rows-by-cols matrix whose row sums are the
/// source marginal and column sums the destination marginal.
struct Coupling {
  Matrix p;

  std::size_t rows() const { return p.rows; }
  std::size_t cols() const { return p.cols; }
  double at(std::size_t i, std::size_t j) const { return p.at(i, j); }

  std::vector<double> row_marginal() const;
  std::vector<double> col_marginal() const;

  /// Cells with mass above eps, in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> support(
      double eps = kSupportEps) const;

  /// Max violation of the marginal constraints / negativity.
  double marginal_error(std::span<const double> mu,
                        std::span<const double> nu) const;
};

struct TransportResult {
  double value = 0.0;
  Coupling plan;
};

/// Exact p-Wasserstein transport for finite p >= 1: minimizes
/// (sum P_ij cost_ij^p)^(1/p) over couplings of (mu, nu). Solved as a
/// min-cost flow by successive shortest paths, so the optimum is exact (up
/// to floating-point rounding) and the returned plan is an optimal vertex.
/// Throws InfeasibleProblem if the marginal masses differ by more than
/// kMarginalTol, InvalidInput on bad shapes or p < 1.
TransportResult wasserstein_p(const Matrix& cost, std::span<const double> mu,
                              std::span<const double> nu, double p);

/// Exact infinity-Wasserstein transport: minimizes the largest cost used by
/// the plan's support. Solved by bisection over the finite set of distinct
/// cost values with a max-flow feasibility test at each threshold.
TransportResult wasserstein_inf(const Matrix& cost, std::span<const double> mu,
                                std::span<const double> nu,
                                double support_eps = kSupportEps);

/// All vertices of the transportation polytope C(mu, nu), found by solving
/// every spanning tree of the complete bipartite support graph and keeping
/// the non-negative basic solutions. For uniform equal-size marginals these
/// are exactly the n! permutation matrices (scaled by 1/n). Deduplicated and
/// deterministically ordered. Throws SizeLimitExceeded beyond max_n points
/// per side.
std::vector<Coupling> enumerate_extreme_couplings(std::span<const double> mu,
                                                  std::span<const double> nu,
                                                  std::size_t max_n = 4);

/// True if some coupling of (mu, nu) is supported within the allowed cells;
/// checked with a max-flow. `allowed` is row-major rows*cols.
bool support_feasible(std::span<const char> allowed, std::span<const double> mu,
                      std::span<const double> nu);

/// A witness coupling supported within the allowed cells.
/// Requires support_feasible.
Coupling fill_support(std::span<const char> allowed, std::span<const double> mu,
                      std::span<const double> nu);

}  // namespace mmf
