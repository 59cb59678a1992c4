#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mmfield/field.hpp"
#include "mmfield/metric.hpp"
#include "mmfield/rng.hpp"

namespace mmf::testutil {

/// Random pseudo-metric: symmetric non-negative entries repaired into a
/// metric by shortest-path closure.
inline FiniteMetric random_metric(const CounterRng& rng, std::uint64_t stream,
                                  std::size_t n, double scale = 1.0) {
  std::vector<double> d(n * n, 0.0);
  std::uint64_t ctr = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = scale * (0.05 + 0.95 * rng.uniform01(stream, ctr++));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  return FiniteMetric::from_flat(n, std::move(d));
}

/// Random 1-Lipschitz real function on the metric: the lower envelope
/// min_j (g_j + d(i, j)) of arbitrary anchor values g.
inline std::vector<double> random_lipschitz(const CounterRng& rng,
                                            std::uint64_t stream,
                                            const FiniteMetric& m,
                                            double scale = 1.0) {
  const std::size_t n = m.size();
  std::vector<double> g(n), f(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = scale * rng.uniform01(stream, 1000 + i);
  for (std::size_t i = 0; i < n; ++i) {
    double best = g[i];
    for (std::size_t j = 0; j < n; ++j) best = std::min(best, g[j] + m(i, j));
    f[i] = best;
  }
  return f;
}

/// Random field into the real line with a 1-Lipschitz value map.
inline MMField random_real_field(const CounterRng& rng, std::uint64_t stream,
                                 std::size_t n, bool uniform_mass = true,
                                 double scale = 1.0) {
  MMField f;
  f.metric = random_metric(rng, stream, n, scale);
  if (uniform_mass) {
    f.measure = uniform_measure(n);
  } else {
    f.measure.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f.measure[i] = 0.1 + rng.uniform01(stream, 2000 + i);
      total += f.measure[i];
    }
    for (double& v : f.measure) v /= total;
  }
  f.target = TargetSpace::euclidean(1);
  const auto vals = random_lipschitz(rng, stream, f.metric, scale);
  for (double v : vals) f.values.emplace_back(std::vector<double>{v});
  return f;
}

/// The worked two-point pair: d = 1 on both sides, values (0, 1) vs (0, 0).
inline std::pair<MMField, MMField> worked_pair() {
  const FiniteMetric two(std::vector<std::vector<double>>{{0, 1}, {1, 0}});
  MMField fx{two, uniform_measure(2), TargetSpace::euclidean(1),
             {std::vector<double>{0.0}, std::vector<double>{1.0}}};
  MMField fy{two, uniform_measure(2), TargetSpace::euclidean(1),
             {std::vector<double>{0.0}, std::vector<double>{0.0}}};
  return {fx, fy};
}

/// 3-point path: d(0,1) = d(1,2) = 1, d(0,2) = 2.
inline FiniteMetric path3() {
  return FiniteMetric(std::vector<std::vector<double>>{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
}

}  // namespace mmf::testutil
