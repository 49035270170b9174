#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "netprop/errors.hpp"
#include "netprop/graph.hpp"
#include "oracle.hpp"

using namespace netprop;

TEST_CASE("affinity: identical feature rows get weight 1") {
  const std::vector<double> features = {0.5, -1.0, 0.5, -1.0};
  const SparseNetwork net = build_affinity(features, 2, 2, {});
  CHECK(net.adjacency().at(0, 1) == doctest::Approx(1.0));
  CHECK(net.adjacency().at(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("affinity: diagonal is always empty") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::vector<double> features(7 * 3);
  for (double& v : features) v = value(rng);
  const SparseNetwork net = build_affinity(features, 7, 3, {});
  for (index_t i = 0; i < 7; ++i) CHECK(net.adjacency().at(i, i) == 0.0);
}

TEST_CASE("affinity: 3-4-5 triangle distance, sigma 1") {
  const std::vector<double> features = {0.0, 0.0, 3.0, 4.0};
  const SparseNetwork net = build_affinity(features, 2, 2, {});
  // scalar-arithmetic oracle for exp(-dist / (2 sigma^2))
  const double dist = std::sqrt(3.0 * 3.0 + 4.0 * 4.0);
  const double expected = std::exp(-dist / 2.0);
  CHECK(expected == doctest::Approx(0.082085).epsilon(1e-5));
  CHECK(net.adjacency().at(0, 1) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("affinity: norm-squared exponent switch") {
  const std::vector<double> features = {0.0, 0.0, 3.0, 4.0};
  AffinityParams params;
  params.exponent = AffinityExponent::norm_squared;
  params.sigma = 2.0;
  const SparseNetwork net = build_affinity(features, 2, 2, params);
  CHECK(net.adjacency().at(0, 1) == doctest::Approx(std::exp(-25.0 / 8.0)).epsilon(1e-14));
}

TEST_CASE("affinity: entries below the floor are dropped") {
  // dist 100 -> exp(-50) ~ 2e-22, below a floor of 1e-12
  const std::vector<double> features = {0.0, 100.0, 50.0};
  const SparseNetwork net = build_affinity(features, 3, 1, {});
  CHECK(net.adjacency().at(0, 1) == 0.0);
  CHECK(net.adjacency().at(0, 2) > 0.0);  // dist 50 -> exp(-25) ~ 1.4e-11 survives
}

TEST_CASE("affinity: errors") {
  const std::vector<double> features = {0.0, 1.0};
  AffinityParams params;
  params.sigma = 0.0;
  CHECK_THROWS_AS(build_affinity(features, 2, 1, params), Error);
  params.sigma = -1.0;
  CHECK_THROWS_AS(build_affinity(features, 2, 1, params), Error);
  CHECK_THROWS_AS(build_affinity(features, 3, 1, {}), Error);  // 3*1 != 2
}

TEST_CASE("affinity: invariant under row permutation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const index_t n = 9;
  const std::size_t p = 4;
  std::vector<double> features(static_cast<std::size_t>(n) * p);
  for (double& v : features) v = value(rng);

  std::vector<index_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> permuted(features.size());
  for (index_t i = 0; i < n; ++i) {
    std::copy_n(features.begin() + static_cast<std::size_t>(i) * p, p,
                permuted.begin() + static_cast<std::size_t>(perm[i]) * p);
  }

  const SparseNetwork base = build_affinity(features, n, p, {});
  const SparseNetwork moved = build_affinity(permuted, n, p, {});
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      CHECK(base.adjacency().at(i, j) ==
            doctest::Approx(moved.adjacency().at(perm[i], perm[j])).epsilon(1e-15));
    }
  }
}

TEST_CASE("degrees: worked examples") {
  SUBCASE("single unit edge") {
    const SparseNetwork net = SparseNetwork::from_edges(2, {{0, 1, 1.0}});
    const DegreeVector d = degrees(net);
    CHECK(d.d == std::vector<double>{1.0, 1.0});
  }
  SUBCASE("empty graph keeps isolated zeros") {
    const SparseNetwork net = SparseNetwork::from_edges(3, {});
    CHECK(degrees(net).d == std::vector<double>{0.0, 0.0, 0.0});
  }
  SUBCASE("weighted triangle") {
    const SparseNetwork net =
        SparseNetwork::from_edges(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
    CHECK(degrees(net).d == std::vector<double>{4.0, 3.0, 5.0});
  }
}

TEST_CASE("degrees equal brute-force dense row sums") {
  oracle::Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const index_t n = static_cast<index_t>(3 + trial * 5);
    const SparseNetwork net = oracle::random_network(n, 0.25, rng, false);
    const oracle::Dense dense = oracle::densify(net.adjacency());
    const DegreeVector d = degrees(net);
    for (index_t i = 0; i < n; ++i) {
      double want = 0.0;
      for (index_t j = 0; j < n; ++j) want += dense.at(i, j);
      CHECK(d.d[i] == doctest::Approx(want).epsilon(1e-13));
      CHECK(d.d[i] >= 0.0);
    }
  }
}

TEST_CASE("networks stay symmetric with an empty diagonal") {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const index_t n = static_cast<index_t>(2 + trial * 6);
    const SparseNetwork net = oracle::random_network(n, 0.3, rng, trial % 2 == 0);
    CHECK(net.adjacency().max_asymmetry() == 0.0);
    for (index_t i = 0; i < n; ++i) CHECK(net.adjacency().at(i, i) == 0.0);
    for (const double w : net.adjacency().val) CHECK(w > 0.0);
  }
}

TEST_CASE("network construction errors") {
  CHECK_THROWS_AS(SparseNetwork::from_edges(2, {{0, 0, 1.0}}), Error);   // self-loop
  CHECK_THROWS_AS(SparseNetwork::from_edges(2, {{0, 1, -0.5}}), Error);  // negative
  CHECK_THROWS_AS(SparseNetwork::from_edges(2, {{0, 3, 1.0}}), Error);   // out of range
  CHECK_THROWS_AS(SparseNetwork::from_edges(2, {{0, 1, 1.0}, {1, 0, 2.0}}), Error);

  // identical restatement is tolerated, zero weight is simply absent
  const SparseNetwork net = SparseNetwork::from_edges(3, {{0, 1, 1.5}, {1, 0, 1.5}, {1, 2, 0.0}});
  CHECK(net.nnz() == 2);
  CHECK(net.adjacency().at(1, 2) == 0.0);
}

TEST_CASE("collection validation") {
  NetworkCollection coll;
  coll.n = 2;
  coll.node_names = {"a", "b"};
  CHECK_THROWS_AS(coll.validate(), Error);  // m = 0
  coll.networks.push_back(SparseNetwork::from_edges(2, {{0, 1, 1.0}}));
  CHECK_NOTHROW(coll.validate());
  coll.networks.push_back(SparseNetwork::from_edges(3, {}));
  CHECK_THROWS_AS(coll.validate(), Error);  // mismatched n
}
