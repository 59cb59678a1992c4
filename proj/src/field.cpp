#include "mmfield/field.hpp"

#include <cmath>
#include <numeric>

namespace mmf {

std::vector<double> uniform_measure(std::size_t n) {
  if (n == 0) throw InvalidInput("measure on zero points");
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

ValidationReport validate_field(const MMField& f, double tol) {
  const std::size_t n = f.metric.size();
  if (f.measure.size() != n)
    throw InvalidInput("measure length does not match metric size");
  if (f.values.size() != n)
    throw InvalidInput("value list length does not match metric size");
  for (const auto& v : f.values)
    if (!f.target.well_formed(v))
      throw InvalidInput("field value does not match the target space");

  ValidationReport rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = f.target.distance(f.values[i], f.values[j]);
      const double excess = gap - f.metric(i, j);
      if (excess > tol)
        rep.add({Violation::Kind::lipschitz, i, j, Violation::npos, excess});
    }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (f.measure[i] < 0)
      rep.add({Violation::Kind::measure_negative, i, Violation::npos,
               Violation::npos, -f.measure[i]});
    sum += f.measure[i];
  }
  const double sum_gap = std::abs(sum - 1.0);
  if (sum_gap > kMeasureSumTol)
    rep.add({Violation::Kind::measure_sum, Violation::npos, Violation::npos,
             Violation::npos, sum_gap});
  return rep;
}

MMField isomorphic_relabel(const MMField& f, std::span<const std::size_t> perm) {
  const std::size_t n = f.size();
  if (perm.size() != n) throw InvalidInput("permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw InvalidInput("not a permutation");
    seen[p] = true;
  }
  std::vector<double> d(n * n);
  std::vector<double> mu(n);
  std::vector<TargetPoint> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = f.measure[perm[i]];
    vals[i] = f.values[perm[i]];
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = f.metric(perm[i], perm[j]);
  }
  return MMField{FiniteMetric::from_flat(n, std::move(d)), std::move(mu),
                 f.target, std::move(vals)};
}

}  // namespace mmf
