#include "mmfield/lipschitz.hpp"

#include <algorithm>
#include <cmath>

namespace mmf {

double sup_gap(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw InvalidInput("sup_gap length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s = std::max(s, std::abs(f[i] - g[i]));
  return s;
}

bool is_one_lipschitz(std::span<const double> f, const FiniteMetric& m, double tol) {
  if (f.size() != m.size()) throw InvalidInput("function length mismatch");
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (std::abs(f[i] - f[j]) > m(i, j) + tol) return false;
  return true;
}

bool is_delta(std::span<const double> f, const FiniteMetric& m, double tol) {
  if (f.size() != m.size()) throw InvalidInput("function length mismatch");
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i; j < f.size(); ++j)
      if (m(i, j) > f[i] + f[j] + tol) return false;
  return true;
}

bool is_delta1(std::span<const double> f, const FiniteMetric& m, double tol) {
  return is_one_lipschitz(f, m, tol) && is_delta(f, m, tol);
}

std::vector<double> whitney_mcshane(std::span<const double> f_on_a,
                                    const FiniteMetric& m,
                                    std::span<const std::size_t> a, double tol) {
  if (a.empty()) throw InvalidInput("whitney_mcshane with empty support set");
  if (f_on_a.size() != a.size())
    throw InvalidInput("whitney_mcshane value/support length mismatch");
  for (std::size_t idx : a)
    if (idx >= m.size()) throw InvalidInput("support index out of range");
  // The inf-formula is only the maximal extension when f is 1-Lipschitz on A.
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t t = s + 1; t < a.size(); ++t)
      if (std::abs(f_on_a[s] - f_on_a[t]) > m(a[s], a[t]) + tol)
        throw InvalidInput("whitney_mcshane input is not 1-Lipschitz on its support");

  std::vector<double> out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < a.size(); ++s)
      best = std::min(best, f_on_a[s] + m(a[s], x));
    out[x] = best;
  }
  // Pin the values on A exactly; with tol-loose input the infimum can land
  // up to tol below them.
  for (std::size_t s = 0; s < a.size(); ++s) out[a[s]] = f_on_a[s];
  return out;
}

std::vector<double> kuratowski_row(const FiniteMetric& m, std::size_t x) {
  if (x >= m.size()) throw InvalidInput("kuratowski index out of range");
  auto row = m.row(x);
  return {row.begin(), row.end()};
}

std::vector<double> pointwise_sup(std::span<const std::vector<double>> fs) {
  if (fs.empty()) throw InvalidInput("pointwise_sup of an empty family");
  std::vector<double> out = fs.front();
  for (const auto& f : fs.subspan(1)) {
    if (f.size() != out.size()) throw InvalidInput("pointwise_sup length mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], f[i]);
  }
  return out;
}

bool field_one_point_feasible(const MMField& f, const OnePointCandidate& c,
                              double tol) {
  if (c.f.size() != f.size()) throw InvalidInput("candidate length mismatch");
  if (!f.target.well_formed(c.b))
    throw InvalidInput("candidate value does not match the target space");
  if (!is_delta1(c.f, f.metric, tol)) return false;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.target.distance(c.b, f.values[i]) > c.f[i] + tol) return false;
  return true;
}

MMField field_one_point_extend(const MMField& f, const OnePointCandidate& c,
                               MassMode mode, double tol) {
  if (!field_one_point_feasible(f, c, tol))
    throw InvalidInput("one-point candidate is infeasible");
  const std::size_t n = f.size();
  std::vector<double> d((n + 1) * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * (n + 1) + j] = f.metric(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * (n + 1) + n] = c.f[i];
    d[n * (n + 1) + i] = c.f[i];
  }

  std::vector<double> mu(n + 1, 0.0);
  if (mode == MassMode::zero_mass) {
    std::copy(f.measure.begin(), f.measure.end(), mu.begin());
  } else {
    const double scale = static_cast<double>(n) / static_cast<double>(n + 1);
    for (std::size_t i = 0; i < n; ++i) mu[i] = f.measure[i] * scale;
    mu[n] = 1.0 / static_cast<double>(n + 1);
  }

  std::vector<TargetPoint> vals = f.values;
  vals.push_back(c.b);
  return MMField{FiniteMetric::from_flat(n + 1, std::move(d)), std::move(mu),
                 f.target, std::move(vals)};
}

}  // namespace mmf
