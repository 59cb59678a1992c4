#include "mmfield/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mmf {

FiniteMetric::FiniteMetric(const std::vector<std::vector<double>>& rows) {
  n_ = rows.size();
  if (n_ == 0) throw InvalidInput("metric needs at least one point");
  d_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw InvalidInput("metric matrix is not square");
    d_.insert(d_.end(), row.begin(), row.end());
  }
}

FiniteMetric::FiniteMetric(std::initializer_list<std::initializer_list<double>> rows) {
  n_ = rows.size();
  if (n_ == 0) throw InvalidInput("metric needs at least one point");
  d_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw InvalidInput("metric matrix is not square");
    d_.insert(d_.end(), row.begin(), row.end());
  }
}

FiniteMetric FiniteMetric::from_flat(std::size_t n, std::vector<double> d) {
  if (n == 0) throw InvalidInput("metric needs at least one point");
  if (d.size() != n * n) throw InvalidInput("flat metric has wrong length");
  FiniteMetric m;
  m.n_ = n;
  m.d_ = std::move(d);
  return m;
}

FiniteMetric FiniteMetric::zero(std::size_t n) {
  return from_flat(n, std::vector<double>(n * n, 0.0));
}

double FiniteMetric::diameter() const {
  double best = 0.0;
  for (double v : d_) best = std::max(best, v);
  return best;
}

FiniteMetric FiniteMetric::submetric(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw InvalidInput("submetric of empty index set");
  for (std::size_t idx : indices)
    if (idx >= n_) throw InvalidInput("submetric index out of range");
  const std::size_t k = indices.size();
  std::vector<double> d(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      d[i * k + j] = (*this)(indices[i], indices[j]);
  return from_flat(k, std::move(d));
}

std::string Violation::describe() const {
  char buf[160];
  switch (kind) {
    case Kind::negative_entry:
      std::snprintf(buf, sizeof buf, "negative entry d(%zu,%zu), excess %g", i, j, excess);
      break;
    case Kind::nonzero_diagonal:
      std::snprintf(buf, sizeof buf, "nonzero diagonal d(%zu,%zu), excess %g", i, i, excess);
      break;
    case Kind::asymmetry:
      std::snprintf(buf, sizeof buf, "asymmetry d(%zu,%zu) != d(%zu,%zu), gap %g", i, j, j, i, excess);
      break;
    case Kind::triangle:
      std::snprintf(buf, sizeof buf, "triangle (%zu,%zu,%zu): d(%zu,%zu) > d(%zu,%zu)+d(%zu,%zu) by %g",
                    i, j, k, i, k, i, j, j, k, excess);
      break;
    case Kind::lipschitz:
      std::snprintf(buf, sizeof buf, "lipschitz pair (%zu,%zu): value gap exceeds distance by %g", i, j, excess);
      break;
    case Kind::measure_negative:
      std::snprintf(buf, sizeof buf, "negative measure at %zu, excess %g", i, excess);
      break;
    case Kind::measure_sum:
      std::snprintf(buf, sizeof buf, "measure sum differs from 1 by %g", excess);
      break;
  }
  return buf;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream out;
  out << total_violations << " violation(s)";
  if (total_violations > violations.size())
    out << " (first " << violations.size() << " shown)";
  out << ":\n";
  for (const auto& v : violations) out << "  " << v.describe() << "\n";
  return out.str();
}

ValidationReport validate_metric(const FiniteMetric& m, double tol) {
  if (tol < 0) throw InvalidInput("tolerance must be non-negative");
  ValidationReport rep;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dii = m(i, i);
    if (std::abs(dii) > tol)
      rep.add({Violation::Kind::nonzero_diagonal, i, i, Violation::npos, std::abs(dii)});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < -tol)
        rep.add({Violation::Kind::negative_entry, i, j, Violation::npos, -m(i, j)});
      if (j > i) {
        const double gap = std::abs(m(i, j) - m(j, i));
        if (gap > tol)
          rep.add({Violation::Kind::asymmetry, i, j, Violation::npos, gap});
      }
    }
  // Triangle over all i < k with any intermediate j; symmetry makes the
  // mirrored constraints redundant once checked above.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = i + 1; k < n; ++k) {
        if (k == j) continue;
        const double excess = m(i, k) - (m(i, j) + m(j, k));
        if (excess > tol)
          rep.add({Violation::Kind::triangle, i, j, k, excess});
      }
    }
  return rep;
}

double hausdorff(const FiniteMetric& m, std::span<const std::size_t> a,
                 std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) throw InvalidInput("hausdorff of an empty set");
  for (std::size_t idx : a)
    if (idx >= m.size()) throw InvalidInput("hausdorff index out of range");
  for (std::size_t idx : b)
    if (idx >= m.size()) throw InvalidInput("hausdorff index out of range");
  double worst = 0.0;
  for (std::size_t x : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t y : b) nearest = std::min(nearest, m(x, y));
    worst = std::max(worst, nearest);
  }
  for (std::size_t y : b) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t x : a) nearest = std::min(nearest, m(x, y));
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace mmf
