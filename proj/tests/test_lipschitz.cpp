#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "mmfield/lipschitz.hpp"
#include "test_util.hpp"

using namespace mmf;
using testutil::path3;

namespace {

// Random 1-Lipschitz extension of f|A, always pointwise between the lower
// McShane envelope and the Whitney-McShane upper envelope. Built by fixing
// one free point at a time at a random feasible value.
std::vector<double> random_feasible_extension(const CounterRng& rng,
                                              std::uint64_t stream,
                                              std::span<const double> f_on_a,
                                              const FiniteMetric& m,
                                              std::vector<std::size_t> a) {
  std::vector<double> vals(f_on_a.begin(), f_on_a.end());
  std::vector<char> fixed(m.size(), 0);
  for (std::size_t idx : a) fixed[idx] = 1;
  std::uint64_t ctr = 0;
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (fixed[x]) continue;
    double lower = -1e300, upper = 1e300;
    for (std::size_t s = 0; s < a.size(); ++s) {
      lower = std::max(lower, vals[s] - m(a[s], x));
      upper = std::min(upper, vals[s] + m(a[s], x));
    }
    const double t = rng.uniform01(stream, ctr++);
    vals.push_back(lower + t * (upper - lower));
    a.push_back(x);
    fixed[x] = 1;
  }
  std::vector<double> g(m.size());
  for (std::size_t s = 0; s < a.size(); ++s) g[a[s]] = vals[s];
  return g;
}

}  // namespace

TEST_CASE("membership predicates") {
  const auto m = path3();
  const std::vector<double> zero{0, 0, 0};
  CHECK(is_one_lipschitz(zero, m));
  CHECK_FALSE(is_delta(zero, m));  // d not identically zero
  CHECK(is_delta(zero, FiniteMetric::zero(3)));

  const auto row = kuratowski_row(m, 0);
  CHECK(is_delta1(row, m));

  const FiniteMetric two({{0, 2}, {2, 0}});
  const std::vector<double> f{0, 1};
  CHECK(is_one_lipschitz(f, two));
  CHECK_FALSE(is_delta(f, two));  // 2 > 0 + 1
}

TEST_CASE("whitney_mcshane worked examples") {
  const auto m = path3();
  // Full-domain extension is the identity.
  const std::vector<double> f{0.25, 0.5, 1.25};
  REQUIRE(is_one_lipschitz(f, m));
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(whitney_mcshane(f, m, all) == f);

  // X = {a1, a2, x} with d(a1,a2) = 2, d(a1,x) = d(a2,x) = 1, f = (0, 2) on A.
  const FiniteMetric mm({{0, 2, 1}, {2, 0, 1}, {1, 1, 0}});
  const std::vector<std::size_t> a{0, 1};
  const auto ext = whitney_mcshane(std::vector<double>{0, 2}, mm, a);
  CHECK(ext[0] == 0.0);
  CHECK(ext[1] == 2.0);
  CHECK(ext[2] == doctest::Approx(1.0));

  // Singleton support: c + d(a, .).
  const std::vector<std::size_t> one{1};
  const auto ext1 = whitney_mcshane(std::vector<double>{0.5}, m, one);
  for (std::size_t x = 0; x < 3; ++x) CHECK(ext1[x] == doctest::Approx(0.5 + m(1, x)));

  CHECK_THROWS_AS(whitney_mcshane({}, m, {}), InvalidInput);
  CHECK_THROWS_AS(whitney_mcshane(std::vector<double>{0, 5}, m,
                                  std::vector<std::size_t>{0, 1}),
                  InvalidInput);  // not 1-Lipschitz on A
}

TEST_CASE("whitney_mcshane is the maximal 1-Lipschitz extension") {
  const CounterRng rng(2024);
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 6;  // up to 8 points
    const auto m = testutil::random_metric(rng, 10 + trial, n);
    const std::size_t asize = 1 + static_cast<std::size_t>(
                                      rng.uniform01(trial, 0) * (n - 1));
    std::vector<std::size_t> a(asize);
    for (std::size_t k = 0; k < asize; ++k) a[k] = (trial + 2 * k) % n;
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());

    const auto full = testutil::random_lipschitz(rng, 500 + trial, m);
    std::vector<double> f_on_a;
    for (std::size_t idx : a) f_on_a.push_back(full[idx]);

    const auto wm = whitney_mcshane(f_on_a, m, a);
    CHECK(is_one_lipschitz(wm, m, 1e-12));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(wm[a[k]] == f_on_a[k]);

    const auto g = random_feasible_extension(rng, 900 + trial, f_on_a, m, a);
    REQUIRE(is_one_lipschitz(g, m, 1e-9));
    for (std::size_t x = 0; x < n; ++x) CHECK(g[x] <= wm[x] + 1e-12);
  }
}

TEST_CASE("extension is isometric and preserves Delta^1") {
  const CounterRng rng(31);
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const auto m = testutil::random_metric(rng, 40 + trial, n);
    std::vector<std::size_t> a;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform01(trial, 77 + i) < 0.6) a.push_back(i);
    if (a.empty()) a.push_back(trial % n);

    const auto f_full = testutil::random_lipschitz(rng, 600 + trial, m);
    const auto g_full = testutil::random_lipschitz(rng, 700 + trial, m);
    std::vector<double> fa, ga;
    for (std::size_t idx : a) {
      fa.push_back(f_full[idx]);
      ga.push_back(g_full[idx]);
    }
    const auto fe = whitney_mcshane(fa, m, a);
    const auto ge = whitney_mcshane(ga, m, a);
    CHECK(sup_gap(fe, ge) == doctest::Approx(sup_gap(fa, ga)).epsilon(1e-12));

    // Delta^1 on A extends to Delta^1 on X.
    const auto sub = m.submetric(a);
    std::vector<double> kr = kuratowski_row(sub, 0);
    REQUIRE(is_delta1(kr, sub, 1e-12));
    const auto kre = whitney_mcshane(kr, m, a);
    CHECK(is_delta1(kre, m, 1e-12));
  }
}

TEST_CASE("restriction-extension is stable under Hausdorff perturbation") {
  const CounterRng rng(77);
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + trial % 5;
    const auto m = testutil::random_metric(rng, 90 + trial, n);
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform01(trial, 10 + i) < 0.6) a.push_back(i);
      if (rng.uniform01(trial, 50 + i) < 0.6) b.push_back(i);
    }
    if (a.empty()) a.push_back(0);
    if (b.empty()) b.push_back(n - 1);

    const auto f = testutil::random_lipschitz(rng, 800 + trial, m);
    std::vector<double> fa, fb;
    for (std::size_t idx : a) fa.push_back(f[idx]);
    for (std::size_t idx : b) fb.push_back(f[idx]);
    const auto ea = whitney_mcshane(fa, m, a);
    const auto eb = whitney_mcshane(fb, m, b);
    CHECK(sup_gap(ea, eb) <= 2.0 * hausdorff(m, a, b) + 1e-12);
  }
}

TEST_CASE("extension composes across nested supports") {
  const CounterRng rng(123);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + trial % 4;
    const auto m = testutil::random_metric(rng, 200 + trial, n);
    std::vector<std::size_t> a{trial % n}, b;
    for (std::size_t i = 0; i < n; ++i)
      if (i == a[0] || rng.uniform01(trial, 30 + i) < 0.5) b.push_back(i);

    const auto f = testutil::random_lipschitz(rng, 300 + trial, m);
    std::vector<double> fa{f[a[0]]};
    const auto direct = whitney_mcshane(fa, m, a);

    const auto sub = m.submetric(b);
    std::vector<std::size_t> a_in_b;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (b[k] == a[0]) a_in_b.push_back(k);
    const auto mid = whitney_mcshane(fa, sub, a_in_b);
    const auto composed = whitney_mcshane(mid, m, b);
    for (std::size_t x = 0; x < n; ++x)
      CHECK(composed[x] == doctest::Approx(direct[x]).epsilon(1e-12));
  }
}

TEST_CASE("kuratowski embedding is isometric") {
  const auto m = path3();
  CHECK(sup_gap(kuratowski_row(m, 0), kuratowski_row(m, 0)) == 0.0);
  const FiniteMetric two({{0, 3}, {3, 0}});
  CHECK(sup_gap(kuratowski_row(two, 0), kuratowski_row(two, 1)) == doctest::Approx(3.0));

  // d_inf(f, d(x, .)) = f(x) for f in Delta^1.
  const CounterRng rng(5);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const auto mm = testutil::random_metric(rng, 400 + trial, n);
    // Build an f in Delta^1: distances to a point plus a non-negative offset.
    const std::size_t x0 = trial % n;
    std::vector<double> f = kuratowski_row(mm, x0);
    const double c = rng.uniform01(trial, 1);
    for (double& v : f) v += c;
    REQUIRE(is_delta1(f, mm, 1e-12));
    for (std::size_t x = 0; x < n; ++x)
      CHECK(sup_gap(f, kuratowski_row(mm, x)) == doctest::Approx(f[x]).epsilon(1e-12));
    CHECK_THROWS_AS(kuratowski_row(mm, n), InvalidInput);
  }
}

TEST_CASE("pointwise_sup preserves the function classes") {
  const std::vector<std::vector<double>> fs{{0, 1}, {1, 0}};
  CHECK(pointwise_sup(fs) == std::vector<double>{1, 1});
  CHECK(pointwise_sup(std::vector<std::vector<double>>{{0.5, 2}}) ==
        std::vector<double>{0.5, 2});
  CHECK_THROWS_AS(pointwise_sup({}), InvalidInput);

  const CounterRng rng(8);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const auto m = testutil::random_metric(rng, 500 + trial, n);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < 3; ++k) {
      auto f = kuratowski_row(m, (trial + k) % n);
      for (double& v : f) v += 0.25 * rng.uniform01(trial, k);
      rows.push_back(std::move(f));
    }
    for (const auto& f : rows) REQUIRE(is_delta1(f, m, 1e-12));
    CHECK(is_delta1(pointwise_sup(rows), m, 1e-12));
  }
}

TEST_CASE("one-point feasibility worked examples") {
  const CounterRng rng(9);
  const auto f = testutil::random_real_field(rng, 3, 4);

  // Repeating an existing point is always feasible.
  OnePointCandidate repeat{kuratowski_row(f.metric, 2), f.values[2]};
  CHECK(field_one_point_feasible(f, repeat));

  const FiniteMetric one({{0}});
  MMField single{one, uniform_measure(1), TargetSpace::euclidean(1),
                 {std::vector<double>{0.0}}};
  CHECK_FALSE(field_one_point_feasible(
      single, {std::vector<double>{1.0}, std::vector<double>{2.0}}));
  CHECK(field_one_point_feasible(
      single, {std::vector<double>{2.0}, std::vector<double>{2.0}}));
}

TEST_CASE("one-point extension output is a valid field") {
  const CounterRng rng(10);
  const auto f = testutil::random_real_field(rng, 5, 5);

  OnePointCandidate repeat{kuratowski_row(f.metric, 1), f.values[1]};
  const auto zero = field_one_point_extend(f, repeat, MassMode::zero_mass);
  CHECK(zero.size() == 6);
  CHECK(zero.metric(5, 1) == 0.0);
  CHECK(zero.measure[5] == 0.0);
  for (std::size_t i = 0; i < 5; ++i) CHECK(zero.measure[i] == f.measure[i]);
  CHECK(validate_field(zero).ok());
  CHECK(validate_metric(zero.metric).ok());

  const auto re = field_one_point_extend(f, repeat, MassMode::uniform_reweight);
  CHECK(re.measure[5] == doctest::Approx(1.0 / 6));
  CHECK(validate_field(re).ok());

  // a1/a2 example: extend with f = (1, 1) at the midpoint-like position.
  const FiniteMetric mm({{0, 2}, {2, 0}});
  MMField g{mm, uniform_measure(2), TargetSpace::euclidean(1),
            {std::vector<double>{0.0}, std::vector<double>{2.0}}};
  OnePointCandidate mid{std::vector<double>{1, 1}, std::vector<double>{1.0}};
  REQUIRE(field_one_point_feasible(g, mid));
  const auto ext = field_one_point_extend(g, mid, MassMode::zero_mass);
  CHECK(validate_field(ext).ok());
  CHECK(validate_metric(ext.metric).ok());

  OnePointCandidate bad{std::vector<double>{1, 1}, std::vector<double>{5.0}};
  CHECK_THROWS_AS(field_one_point_extend(g, bad, MassMode::zero_mass), InvalidInput);
}
