#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmfield/hypergraph.hpp"
#include "test_util.hpp"

using namespace mmf;
using testutil::path3;

TEST_CASE("3-point path at scale 1") {
  const std::vector<double> ps{1.0, 2.0};
  const auto h = build_hypergraph(path3(), 1.0, ps);
  REQUIRE(h.simplices.size() == 2);
  CHECK(h.simplices[0] == std::vector<std::size_t>{0, 1});
  CHECK(h.simplices[1] == std::vector<std::size_t>{1, 2});
  CHECK(h.measure[0] == doctest::Approx(0.5));
  CHECK(h.measure[1] == doctest::Approx(0.5));
  CHECK(h.metric(0, 1) == doctest::Approx(1.0));
  CHECK(h.centrality.at(0, 0) == doctest::Approx(0.5));
  CHECK(h.centrality.at(0, 1) == doctest::Approx(0.5));

  const auto f = hypergraph_to_field(h, 1.0);
  CHECK(f.size() == 2);
  CHECK(f.metric(0, 1) == doctest::Approx(1.0));
  CHECK(f.target.distance(f.values[0], std::vector<double>{0.5}) ==
        doctest::Approx(0.0));
  CHECK(validate_field(f).ok());
  CHECK_THROWS_AS(hypergraph_to_field(h, 3.0), InvalidInput);
}

TEST_CASE("single community at or beyond the diameter") {
  const auto h = build_hypergraph(path3(), 2.0, std::vector<double>{1.0});
  REQUIRE(h.simplices.size() == 1);
  CHECK(h.simplices[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(h.measure[0] == doctest::Approx(1.0));
  CHECK(h.centrality.at(0, 0) == 0.0);
  const auto f = hypergraph_to_field(h, 1.0);
  CHECK(f.size() == 1);
}

TEST_CASE("scale zero on a genuine metric gives singletons") {
  const auto h = build_hypergraph(path3(), 0.0, std::vector<double>{1.0});
  REQUIRE(h.simplices.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(h.simplices[i] == std::vector<std::size_t>{i});
    CHECK(h.measure[i] == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("two points at distance 2, scale zero") {
  const FiniteMetric m({{0, 2}, {2, 0}});
  const auto h = build_hypergraph(m, 0.0, std::vector<double>{1.0});
  REQUIRE(h.simplices.size() == 2);
  CHECK(h.metric(0, 1) == doctest::Approx(2.0));
  CHECK(h.centrality.at(0, 0) == doctest::Approx(1.0));
  CHECK(h.centrality.at(0, 1) == doctest::Approx(1.0));
  const auto f = hypergraph_to_field(h, 1.0);
  CHECK(f.metric(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("pseudo-metric zero-distance pairs merge at scale zero") {
  const FiniteMetric m({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}});
  const auto h = build_hypergraph(m, 0.0, std::vector<double>{1.0});
  REQUIRE(h.simplices.size() == 2);
  CHECK(h.simplices[0] == std::vector<std::size_t>{0, 1});
  CHECK(h.simplices[1] == std::vector<std::size_t>{2});
  CHECK(h.measure[0] == doctest::Approx(2.0 / 3));
}

TEST_CASE("brute-force oracle agrees with the pivoting enumeration") {
  const CounterRng rng(71);
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 10;  // up to 12
    const auto m = testutil::random_metric(rng, 400 + trial, n);
    // Thresholds spanning empty to complete proximity graphs.
    const double r = m.diameter() * (0.15 + 0.8 * rng.uniform01(trial, 0));
    const auto fast = build_hypergraph(m, r, std::vector<double>{1.0});
    const auto brute = maximal_cliques_bruteforce(m, r);
    CHECK(fast.simplices == brute);
  }
  CHECK_THROWS_AS(
      maximal_cliques_bruteforce(testutil::random_metric(rng, 1, 13), 0.5),
      SizeLimitExceeded);
}

TEST_CASE("hypergraph invariants on random instances") {
  const CounterRng rng(72);
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    const std::size_t n = 3 + trial % 7;
    const auto m = testutil::random_metric(rng, 500 + trial, n);
    const double r = m.diameter() * rng.uniform01(trial, 1);
    const std::vector<double> ps{1.0, 2.5};
    const auto h = build_hypergraph(m, r, ps);

    // Cliqueness, coverage, maximality.
    std::vector<char> covered(n, 0);
    for (const auto& s : h.simplices) {
      for (std::size_t a : s) {
        covered[a] = 1;
        for (std::size_t b : s)
          if (a != b) CHECK(m(a, b) <= r);
      }
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(covered[i] == 1);
    for (const auto& a : h.simplices)
      for (const auto& b : h.simplices)
        if (&a != &b)
          CHECK_FALSE(std::includes(b.begin(), b.end(), a.begin(), a.end()));

    // Measure positivity and exact normalization.
    double total = 0.0;
    for (double v : h.measure) {
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(validate_metric(h.metric).ok());

    // lambda_p is 1-Lipschitz for the Hausdorff metric on every pair.
    for (std::size_t pi = 0; pi < ps.size(); ++pi)
      for (std::size_t i = 0; i < h.simplices.size(); ++i)
        for (std::size_t j = 0; j < h.simplices.size(); ++j)
          CHECK(std::abs(h.centrality.at(pi, i) - h.centrality.at(pi, j)) <=
                h.metric(i, j) + 1e-12);

    const auto f = hypergraph_to_field(h, 2.5);
    CHECK(validate_field(f).ok());
  }
}

TEST_CASE("communities only grow with the scale") {
  const CounterRng rng(73);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + trial % 6;
    const auto m = testutil::random_metric(rng, 600 + trial, n);
    const double r1 = m.diameter() * 0.3;
    const double r2 = m.diameter() * (0.3 + 0.6 * rng.uniform01(trial, 2));
    const auto h1 = build_hypergraph(m, r1, std::vector<double>{1.0});
    const auto h2 = build_hypergraph(m, r2, std::vector<double>{1.0});
    for (const auto& s : h1.simplices) {
      bool contained = false;
      for (const auto& t : h2.simplices)
        if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
          contained = true;
          break;
        }
      CHECK(contained);
    }
  }
}

TEST_CASE("input guards") {
  CHECK_THROWS_AS(build_hypergraph(path3(), -1.0, std::vector<double>{1.0}),
                  InvalidInput);
  CHECK_THROWS_AS(build_hypergraph(path3(), 1.0, std::vector<double>{0.5}),
                  InvalidInput);
}
