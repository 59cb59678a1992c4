#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mmfield/errors.hpp"

namespace mmf {

/// Default tolerance for metric-axiom and Lipschitz checks.
inline constexpr double kDefaultTol = 1e-9;

/// One violated constraint found by a validator. `k` is unused (npos) for
/// pairwise constraints. `excess` is how far past the tolerance the
/// constraint is broken.
struct Violation {
  enum class Kind {
    negative_entry,
    nonzero_diagonal,
    asymmetry,
    triangle,
    lipschitz,
    measure_negative,
    measure_sum,
  };
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Kind kind;
  std::size_t i = npos;
  std::size_t j = npos;
  std::size_t k = npos;
  double excess = 0.0;

  std::string describe() const;
};

/// Result of a report-style validation. Records the first `max_recorded`
/// violations in index order but counts all of them.
struct ValidationReport {
  static constexpr std::size_t max_recorded = 100;

  std::vector<Violation> violations;
  std::size_t total_violations = 0;

  bool ok() const { return total_violations == 0; }
  void add(Violation v) {
    ++total_violations;
    if (violations.size() < max_recorded) violations.push_back(v);
  }
  std::string to_string() const;
};

/// A finite pseudo-metric space: n points and an n-by-n distance matrix.
/// Zeros off the diagonal are allowed. Immutable after construction.
class FiniteMetric {
 public:
  FiniteMetric() = default;

  /// From a square matrix given as rows. Shape-checked only; run
  /// validate_metric for the axioms.
  explicit FiniteMetric(const std::vector<std::vector<double>>& rows);
  FiniteMetric(std::initializer_list<std::initializer_list<double>> rows);

  static FiniteMetric from_flat(std::size_t n, std::vector<double> d);

  /// All-zero n-point pseudo-metric.
  static FiniteMetric zero(std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }
  const std::vector<double>& flat() const { return d_; }

  double diameter() const;

  /// Restriction to the given indices, in the given order (repeats allowed).
  FiniteMetric submetric(std::span<const std::size_t> indices) const;

  bool operator==(const FiniteMetric&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Brute-force check of the pseudo-metric axioms: zero diagonal, symmetry,
/// non-negativity, and all triangle inequalities within tol.
ValidationReport validate_metric(const FiniteMetric& m, double tol = kDefaultTol);

/// Hausdorff distance between two non-empty index subsets of a finite metric:
/// max(max_{a in A} min_{b in B} d(a,b), max_{b in B} min_{a in A} d(a,b)).
double hausdorff(const FiniteMetric& m, std::span<const std::size_t> a,
                 std::span<const std::size_t> b);

}  // namespace mmf
