#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mmfield/field.hpp"
#include "mmfield/transport.hpp"

namespace mmf {

inline constexpr double kInfiniteP = std::numeric_limits<double>::infinity();

/// Pairwise costs between two fields over the same target: the metric
/// distortion m((i,j),(i',j')) = |d_X(i,i') - d_Y(j,j')| (evaluated lazily)
/// and the value-gap matrix dB(i,j) = d_B(value_X(i), value_Y(j)).
struct FieldPairCosts {
  FiniteMetric dx;
  FiniteMetric dy;
  Matrix db;

  std::size_t nx() const { return dx.size(); }
  std::size_t ny() const { return dy.size(); }

  double m(std::size_t i, std::size_t j, std::size_t i2, std::size_t j2) const {
    const double g = dx(i, i2) - dy(j, j2);
    return g < 0 ? -g : g;
  }

  /// Builds the cost pair; throws InvalidInput if the targets differ.
  static FieldPairCosts build(const MMField& fx, const MMField& fy);
};

enum class GwMode { exact_oracle, local_search };

struct GwOptions {
  double grid_step = 1e-2;       // edge-grid resolution of the finite-p oracle
  std::size_t restarts = 32;     // local-search random restarts
  std::size_t exact_cell_limit = 16;  // max nx*ny for the p=inf oracle
  std::size_t vertex_max_n = 4;  // per-side limit for vertex enumeration
  double support_eps = kSupportEps;
  std::uint64_t seed = 0;        // local-search restarts
};

struct GwResult {
  double value = 0.0;
  Coupling coupling;
  double p = kInfiniteP;
  GwMode mode = GwMode::exact_oracle;
  /// Additive certificate error of the search: 0 for the p=inf oracle,
  /// the grid-Lipschitz bound for the finite-p oracle, +inf for local
  /// search (upper bound only).
  double error_bound = 0.0;
  /// Number of candidates examined by the exact oracle.
  std::size_t search_size = 0;
};

/// The coupling's objective: for finite p,
///   max( 1/2 (int m^p dPxP)^(1/p), (int dB^p dP)^(1/p) );
/// for p = inf the same with sups over the support of PxP and P.
double gw_objective(const Coupling& plan, const FieldPairCosts& costs, double p,
                    double support_eps = kSupportEps);

/// Field Gromov-Wasserstein distance between two fields over the same target.
///
/// exact_oracle, p = inf: the objective depends only on the support, so the
/// minimum is found by enumerating support patterns that admit a coupling
/// (checked by max-flow) and taking the feasibility-filtered minimum. Exact.
///
/// exact_oracle, finite p: certified search over all transportation-polytope
/// vertices plus a fixed grid along every segment between vertex pairs; the
/// reported error_bound is the grid-Lipschitz slack (4 * diam * step).
///
/// local_search: alternating minimization (linearize, solve the transport LP,
/// line-search) from random restarts; result is an upper bound.
GwResult gw_distance(const MMField& fx, const MMField& fy, double p,
                     GwMode mode, const GwOptions& opt = {});

struct GluedField {
  MMField field;   // over the disjoint union X ⊔ Y
  double r = 0.0;  // the sup objective of the gluing coupling
};

/// Glues two fields along a coupling: cross distances are
/// r + min over supp P of (d_X(x, x') + d_Y(y', y)) with r the coupling's
/// sup objective. The result is a valid field over X ⊔ Y whose halves embed
/// isometrically; the measure splits weight_x / (1 - weight_x).
GluedField glue(const MMField& fx, const MMField& fy, const Coupling& plan,
                double weight_x = 0.5, double support_eps = kSupportEps);

struct EmbeddingBound {
  double lhs = 0.0;  // gw distance (exact oracle)
  double rhs = 0.0;  // Wasserstein distance between the embedded measures
  bool ok = false;   // lhs <= rhs + 1e-8
};

/// Checks d_GW,p <= d_W,p of the pushforward measures inside the glued space.
EmbeddingBound embedding_bound_check(const MMField& fx, const MMField& fy,
                                     const Coupling& plan, double p,
                                     const GwOptions& opt = {});

/// Draws seq_len pairs i.i.d. from an exact optimal coupling and evaluates
/// the sup objective over the drawn pairs. Converges to the distance from
/// below as seq_len grows and never exceeds it.
double gw_uniform_certificate(const MMField& fx, const MMField& fy,
                              std::size_t seq_len, std::uint64_t seed,
                              const GwOptions& opt = {});

}  // namespace mmf
