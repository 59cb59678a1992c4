#pragma once

#include <span>
#include <vector>

#include "mmfield/metric.hpp"
#include "mmfield/target.hpp"

namespace mmf {

/// A finite metric-measure field: a pseudo-metric space with a probability
/// measure and a 1-Lipschitz assignment of target points. Immutable value
/// type; validation is a separate report-style operation.
struct MMField {
  FiniteMetric metric;
  std::vector<double> measure;
  TargetSpace target;
  std::vector<TargetPoint> values;

  std::size_t size() const { return metric.size(); }
};

std::vector<double> uniform_measure(std::size_t n);

/// Checks the field invariants: the value map is 1-Lipschitz
/// (d_B(v_i, v_j) <= d(i,j) + tol for all pairs) and the measure is a
/// probability vector. Throws InvalidInput on shape mismatch.
ValidationReport validate_field(const MMField& f, double tol = kDefaultTol);

/// Tolerance on |sum(measure) - 1|.
inline constexpr double kMeasureSumTol = 1e-12;

/// Applies a permutation: point i of the result is point perm[i] of the
/// input, with metric, measure and values permuted jointly.
MMField isomorphic_relabel(const MMField& f, std::span<const std::size_t> perm);

}  // namespace mmf
