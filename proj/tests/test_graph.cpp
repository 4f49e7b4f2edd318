// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <numeric>
#include <random>

#include "coarse_forest/error.hpp"
#include "coarse_forest/graph.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cforest;

TEST_CASE("graph construction rejects malformed edges") {
  Graph g(3);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(g.add_edge(1, 1), Error);
  CHECK_THROWS_AS(g.add_edge(1, 0), Error);
  CHECK_THROWS_AS(g.add_edge(1, 2, 0.0), Error);
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(1, 2));
}

TEST_CASE("shortest paths") {
  const auto path = all_pairs_distances(fixtures::path(9));
  CHECK(path(0, 8) == 8.0);
  CHECK(all_pairs_distances(fixtures::cycle(8))(0, 4) == 4.0);
  Graph split(4);
  split.add_edge(0, 1);
  split.add_edge(2, 3);
  CHECK(all_pairs_distances(split)(0, 3) == kInfinity);
  CHECK_FALSE(is_connected(split));
  CHECK(is_forest(split));

  Graph weighted(3);
  weighted.add_edge(0, 1, 2.5);
  weighted.add_edge(1, 2, 0.5);
  weighted.add_edge(0, 2, 4.0);
  CHECK(all_pairs_distances(weighted)(0, 2) == 3.0);
}

TEST_CASE("shortest paths agree with Floyd-Warshall") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = fixtures::random_connected(5 + trial, trial, rng);
    const auto d = all_pairs_distances(g);
    const auto oracle = oracles::floyd_warshall(g);
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
      for (std::size_t j = 0; j < g.vertex_count(); ++j) CHECK(d(i, j) == oracle[i][j]);
  }
}

TEST_CASE("four-point constant") {
  CHECK(four_point_delta(fixtures::path(9)).delta == 0.0);
  CHECK(four_point_delta(Graph(1)).delta == 0.0);
  CHECK(four_point_delta(fixtures::path(2)).delta == 0.0);
  const auto c8 = four_point_delta(fixtures::cycle(8));
  CHECK(c8.exhaustive);
  CHECK(c8.delta == oracles::four_point(fixtures::cycle(8)));
  CHECK(c8.delta == 2.0);
  CHECK_THROWS_AS(four_point_delta(Graph(2)), Error);
}

TEST_CASE("four-point constant vanishes on trees and matches the oracle elsewhere") {
  std::mt19937_64 rng(22);
  for (std::size_t n : {3u, 10u, 25u, 40u}) CHECK(four_point_delta(fixtures::random_tree(n, rng)).delta == 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = fixtures::random_connected(6 + trial, 3, rng);
    CHECK(four_point_delta(g).delta == oracles::four_point(g));
  }
}

TEST_CASE("four-point sampling is reproducible") {
  const Graph g = fixtures::grid(6);
  const auto a = four_point_delta(g, 5000, 99);
  const auto b = four_point_delta(g, 5000, 99);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.delta == b.delta);
  CHECK(a.witness == b.witness);
  CHECK(a.delta <= oracles::four_point(g));
}

TEST_CASE("bottleneck constant") {
  CHECK(bottleneck_delta(fixtures::path(9)).delta == 0.5);
  CHECK(bottleneck_delta(fixtures::star(3, 3)).delta <= 1.0);
  for (std::size_t n : {8u, 16u, 32u}) {
    const auto result = bottleneck_delta(fixtures::cycle(n));
    CHECK(result.delta == static_cast<double>(n) / 4.0);
  }
  Graph weighted(2);
  weighted.add_edge(0, 1, 2.0);
  CHECK_THROWS_AS(bottleneck_delta(weighted), Error);
}

TEST_CASE("bottleneck constant matches explicit ball deletion") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const Graph g = fixtures::random_connected(4 + trial, trial % 4, rng);
    CHECK(bottleneck_delta(g).delta == oracles::bottleneck(g));
  }
  for (std::size_t n : {5u, 6u, 9u}) CHECK(bottleneck_delta(fixtures::cycle(n)).delta == oracles::bottleneck(fixtures::cycle(n)));
  CHECK(bottleneck_delta(fixtures::grid(3)).delta == oracles::bottleneck(fixtures::grid(3)));
}

TEST_CASE("bottleneck constant on trees is at most one") {
  std::mt19937_64 rng(24);
  for (std::size_t n : {2u, 7u, 20u, 40u, 64u}) CHECK(bottleneck_delta(fixtures::random_tree(n, rng)).delta <= 1.0);
}

TEST_CASE("expansion profile") {
  const auto path = fixtures::path(9);
  const std::vector<double> ts{1, 2, 3, 8};
  const auto profile = expansion_profile(path, fixtures::identity(9), ts);
  for (const auto& [t, rho] : profile.samples) CHECK(rho == t);
  const auto flat = expansion_profile(path, std::vector<double>(9, 4.0), ts);
  for (const auto& sample : flat.samples) CHECK(sample.second == 0.0);
  const std::vector<double> three{3};
  CHECK(expansion_profile(fixtures::grid(5), fixtures::column_index(5), three).at(3) == 3.0);
}

TEST_CASE("expansion profile is non-decreasing") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> value(-10, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = fixtures::random_connected(10 + trial, 4, rng);
    std::vector<double> f(g.vertex_count());
    for (auto& v : f) v = value(rng);
    const std::vector<double> ts{5, 1, 3, 2, 8, 13};
    const auto profile = expansion_profile(g, f, ts);
    for (std::size_t i = 1; i < profile.samples.size(); ++i) {
      CHECK(profile.samples[i - 1].first < profile.samples[i].first);
      CHECK(profile.samples[i - 1].second <= profile.samples[i].second);
    }
  }
}

TEST_CASE("properness profile") {
  CHECK(properness_profile(fixtures::path(9), fixtures::identity(9), 1.0, 1.0).max_diameter == 2);
  for (std::size_t k : {8u, 16u, 32u})
    CHECK(properness_profile(fixtures::ladder(k), fixtures::rung_index(k), 1.0, 1.0).max_diameter == 3);
  const auto open = properness_profile(fixtures::path(9), fixtures::identity(9), 1.0, 1.0, BandMode::Open);
  CHECK(open.max_diameter == 0);
  for (const auto& row : open.rows) CHECK(row.vertices == 1);
}

TEST_CASE("properness profile matches component enumeration") {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<int> value(0, 12);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = fixtures::random_connected(8 + 2 * trial, trial % 5, rng);
    std::vector<double> f(g.vertex_count());
    for (auto& v : f) v = value(rng);
    for (double N : {0.5, 1.0, 2.0})
      CHECK(properness_profile(g, f, N, 1.0).max_diameter == oracles::properness_max(g, f, N, 1.0));
  }
  for (std::size_t k : {5u, 8u})
    CHECK(properness_profile(fixtures::grid(k), fixtures::column_index(k), 1.0, 1.0).max_diameter ==
          oracles::properness_max(fixtures::grid(k), fixtures::column_index(k), 1.0, 1.0));
}

TEST_CASE("quasi-isometry constants") {
  const Graph path9 = fixtures::path(9);
  std::vector<std::size_t> id(9);
  std::iota(id.begin(), id.end(), std::size_t{0});
  const auto self = qi_estimate(id, path9, path9);
  CHECK(self.lambda == 1.0);
  CHECK(self.additive == 0.0);
  CHECK(self.codensity == 0.0);
  CHECK_FALSE(self.degenerate);

  std::vector<std::size_t> halve(9);
  for (std::size_t i = 0; i < 9; ++i) halve[i] = i / 2;
  const auto half = qi_estimate(halve, path9, fixtures::path(5));
  CHECK(half.lambda == 2.0);
  CHECK(half.additive <= 1.0);
  CHECK(half.codensity == 0.0);

  const std::vector<std::size_t> constant(9, 0);
  CHECK(qi_estimate(constant, path9, fixtures::path(5)).degenerate);
}

TEST_CASE("fitted constants bound every sampled pair") {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> noise(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DistancePair> pairs;
    for (std::size_t i = 0; i < 40; ++i) {
      const double s = 1.0 + static_cast<double>(i);
      pairs.push_back({i, i + 1, s, s * (1.0 + trial / 10.0) + noise(rng)});
    }
    const auto q = fit_quasi_isometry(pairs);
    for (const auto& p : pairs) {
      CHECK(p.target <= q.lambda * p.source + q.additive + 1e-9);
      CHECK(p.source / q.lambda - q.additive <= p.target + 1e-9);
    }
  }
}
