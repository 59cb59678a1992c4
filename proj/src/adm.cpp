#include "mmfield/adm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "mmfield/errors.hpp"
#include "mmfield/rng.hpp"
#include "mmfield/transport.hpp"

namespace mmf {

namespace {

// Static-chunk parallel fill; writes go to disjoint ranges, so the result is
// identical for any thread count.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

std::vector<double> cumulative_measure(const MMField& f) {
  std::vector<double> c(f.measure.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.measure.size(); ++i) {
    if (f.measure[i] < 0) throw InvalidInput("negative measure entry");
    acc += f.measure[i];
    c[i] = acc;
  }
  if (acc <= 0) throw InvalidInput("field measure carries no mass");
  return c;
}

void append_bytes(std::string& key, const void* p, std::size_t len) {
  key.append(static_cast<const char*>(p), len);
}

std::string sample_key(const AdmSample& s) {
  std::string key;
  key.reserve(s.r.flat().size() * 8 + s.b.size() * 16);
  append_bytes(key, s.r.flat().data(), s.r.flat().size() * sizeof(double));
  for (const auto& v : s.b) {
    if (const auto* c = std::get_if<std::vector<double>>(&v)) {
      key.push_back('e');
      append_bytes(key, c->data(), c->size() * sizeof(double));
    } else if (const auto* idx = std::get_if<std::size_t>(&v)) {
      key.push_back('f');
      append_bytes(key, idx, sizeof *idx);
    } else {
      const auto& bits = std::get<std::vector<std::uint8_t>>(v);
      key.push_back('h');
      append_bytes(key, bits.data(), bits.size());
    }
    key.push_back('|');
  }
  return key;
}

struct WeightedSamples {
  std::vector<const AdmSample*> distinct;
  std::vector<double> weight;
};

// Collapses exact duplicates (bit-identical matrices and values) to weighted
// points; the transport problem is unchanged and usually far smaller.
WeightedSamples collapse(const EmpiricalAdm& e) {
  WeightedSamples out;
  std::unordered_map<std::string, std::size_t> index;
  const double w = 1.0 / static_cast<double>(e.samples.size());
  for (const auto& s : e.samples) {
    auto [it, fresh] = index.try_emplace(sample_key(s), out.distinct.size());
    if (fresh) {
      out.distinct.push_back(&s);
      out.weight.push_back(w);
    } else {
      out.weight[it->second] += w;
    }
  }
  return out;
}

}  // namespace

EmpiricalAdm adm_sample(const MMField& f, std::size_t order, std::size_t count,
                        std::uint64_t seed) {
  if (order == 0 || count == 0)
    throw InvalidInput("adm_sample needs order >= 1 and count >= 1");
  const auto cumulative = cumulative_measure(f);
  const CounterRng rng(seed);

  EmpiricalAdm out;
  out.order = order;
  out.target = f.target;
  out.seed = seed;
  out.samples.reserve(count);
  std::vector<std::size_t> idx(order);
  for (std::size_t draw = 0; draw < count; ++draw) {
    for (std::size_t t = 0; t < order; ++t)
      idx[t] = rng.pick(cumulative, draw, t);
    AdmSample s;
    s.r = f.metric.submetric(idx);
    s.b.reserve(order);
    for (std::size_t t = 0; t < order; ++t) s.b.push_back(f.values[idx[t]]);
    s.seed = seed;
    s.draw_index = draw;
    out.samples.push_back(std::move(s));
  }
  return out;
}

double rho_n(const AdmSample& a, const AdmSample& b, const TargetSpace& target) {
  const std::size_t n = a.r.size();
  if (b.r.size() != n || a.b.size() != n || b.b.size() != n)
    throw InvalidInput("rho_n needs samples of equal order");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      worst = std::max(worst, 0.5 * std::abs(a.r(i, j) - b.r(i, j)));
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, target.distance(a.b[i], b.b[i]));
  return worst;
}

double adm_wasserstein(const EmpiricalAdm& dx, const EmpiricalAdm& dy, double p,
                       std::size_t threads) {
  if (dx.order != dy.order)
    throw InvalidInput("ADM distributions have different truncation orders");
  if (!dx.target.same_space(dy.target))
    throw InvalidInput("ADM distributions live over different targets");
  if (dx.samples.empty() || dy.samples.empty())
    throw InvalidInput("empty ADM distribution");

  const auto wx = collapse(dx);
  const auto wy = collapse(dy);
  const std::size_t k1 = wx.distinct.size(), k2 = wy.distinct.size();
  Matrix cost(k1, k2);
  parallel_for(k1, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < k2; ++j)
        cost.at(i, j) = rho_n(*wx.distinct[i], *wy.distinct[j], dx.target);
  });

  if (std::isinf(p)) return wasserstein_inf(cost, wx.weight, wy.weight).value;
  return wasserstein_p(cost, wx.weight, wy.weight, p).value;
}

std::vector<ConvergenceRow> convergence_experiment(
    const MMField& fx, const MMField& fy, std::span<const std::size_t> orders,
    std::size_t count, double p, std::uint64_t base_seed, std::size_t num_seeds,
    const GwOptions& gw_opt, std::size_t threads) {
  if (orders.empty()) throw InvalidInput("no truncation orders requested");
  if (num_seeds == 0) throw InvalidInput("need at least one seed");
  const CounterRng rng(base_seed);

  std::optional<double> oracle;
  try {
    oracle = gw_distance(fx, fy, kInfiniteP, GwMode::exact_oracle, gw_opt).value;
  } catch (const SizeLimitExceeded&) {
    oracle = std::nullopt;
  }

  // Seeds are shared across orders so that the prefix property of the
  // counter-based draws makes per-seed estimates pathwise nondecreasing in n.
  std::vector<std::uint64_t> seed_x(num_seeds), seed_y(num_seeds);
  for (std::size_t s = 0; s < num_seeds; ++s) {
    seed_x[s] = rng.derive(1, s);
    seed_y[s] = rng.derive(2, s);
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t order : orders) {
    std::vector<double> estimates(num_seeds);
    for (std::size_t s = 0; s < num_seeds; ++s) {
      const auto ex = adm_sample(fx, order, count, seed_x[s]);
      const auto ey = adm_sample(fy, order, count, seed_y[s]);
      estimates[s] = adm_wasserstein(ex, ey, p, threads);
    }
    // 95% bootstrap interval of the mean over the per-seed estimates.
    constexpr std::size_t kBoot = 1000;
    std::vector<double> boot_means(kBoot);
    const CounterRng boot_rng(rng.derive(3, order));
    for (std::size_t b = 0; b < kBoot; ++b) {
      double acc = 0.0;
      for (std::size_t s = 0; s < num_seeds; ++s) {
        const std::size_t pickd = static_cast<std::size_t>(
            boot_rng.uniform01(b, s) * static_cast<double>(num_seeds));
        acc += estimates[std::min(pickd, num_seeds - 1)];
      }
      boot_means[b] = acc / static_cast<double>(num_seeds);
    }
    std::sort(boot_means.begin(), boot_means.end());
    const double lower = boot_means[static_cast<std::size_t>(0.025 * (kBoot - 1))];
    const double upper = boot_means[static_cast<std::size_t>(0.975 * (kBoot - 1))];

    for (std::size_t s = 0; s < num_seeds; ++s) {
      ConvergenceRow row;
      row.order = order;
      row.p = p;
      row.count = count;
      row.seed = seed_x[s];
      row.estimate = estimates[s];
      row.lower_noise = lower;
      row.upper_noise = upper;
      row.oracle = oracle;
      rows.push_back(row);
    }
  }
  return rows;
}

ReconstructionResult reconstruction_check(const MMField& fx, const MMField& fy,
                                          std::size_t order, std::size_t count,
                                          std::uint64_t seed, double tol,
                                          std::size_t threads) {
  const CounterRng rng(seed);
  const auto ex = adm_sample(fx, order, count, rng.derive(1, 0));
  const auto ey = adm_sample(fy, order, count, rng.derive(2, 0));
  const double estimate = adm_wasserstein(ex, ey, 1.0, threads);
  return {estimate <= tol, estimate};
}

double uniformity_fraction(const MMField& f, std::size_t order,
                           std::size_t count, double p, double eps,
                           std::uint64_t seed) {
  if (order == 0 || count == 0)
    throw InvalidInput("uniformity_fraction needs order >= 1 and count >= 1");
  const auto cumulative = cumulative_measure(f);
  const CounterRng rng(seed);
  const std::size_t n = f.size();

  Matrix ground(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ground.at(i, j) = f.metric(i, j);
  const double total_mass = cumulative.back();
  std::vector<double> mu(f.measure);
  for (double& v : mu) v /= total_mass;

  std::size_t hits = 0;
  std::vector<double> empirical(n);
  for (std::size_t draw = 0; draw < count; ++draw) {
    std::fill(empirical.begin(), empirical.end(), 0.0);
    for (std::size_t t = 0; t < order; ++t)
      empirical[rng.pick(cumulative, draw, t)] += 1.0 / static_cast<double>(order);
    const double dist = std::isinf(p)
                            ? wasserstein_inf(ground, empirical, mu).value
                            : wasserstein_p(ground, empirical, mu, p).value;
    if (dist <= eps) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(count);
}

}  // namespace mmf
