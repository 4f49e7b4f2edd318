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
#include <algorithm>
#include <numeric>
#include <random>

#include "coarse_forest/error.hpp"
#include "coarse_forest/rips.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cforest;

namespace {

const Ratio kSixth(1, 6);
const Ratio kSeventh(1, 7);

std::size_t count_kind(const LeveledGraph& x, EdgeKind kind) {
  return static_cast<std::size_t>(std::count(x.kind.begin(), x.kind.end(), kind));
}

}  // namespace

TEST_CASE("rips graph joins pairs within the scale") {
  const auto z = fixtures::line3();
  CHECK(rips_graph(z, 1.0).edge_count() == 1);
  CHECK(rips_graph(z, 2.0).edge_count() == 2);
  CHECK(rips_graph(z, 3.0).edge_count() == 3);
  CHECK(rips_graph(z, 0.5).edge_count() == 0);
  CHECK_THROWS_AS(rips_graph(z, 0.0), Error);
}

TEST_CASE("scale parameter is restricted to (0, 1/6]") {
  const auto z = fixtures::line3();
  CHECK_THROWS_AS(build_rh(z, Ratio(1, 5), 0, 1), Error);
  CHECK_THROWS_AS(build_h(z, Ratio(1, 2), 0, 1), Error);
  CHECK_NOTHROW(build_rh(z, kSixth, 0, 1));
  CHECK_THROWS_AS(build_rh(z, kSixth, 2, 1), Error);
  CHECK_THROWS_AS(pq_detector(z, kSixth, 4), Error);
}

TEST_CASE("analyzable window") {
  const auto ult = analyzable_levels(fixtures::ult4(), kSixth);
  CHECK(ult.lo == 1);
  CHECK(ult.hi == 2);
  const auto unif = analyzable_levels(fixtures::unif64(), kSeventh);
  CHECK(unif.lo == 0);
  CHECK(unif.hi == 2);
  const auto line = analyzable_levels(fixtures::line3(), kSixth);
  CHECK(line.lo == -1);
  CHECK(line.hi == 0);
}

TEST_CASE("RH levels are Rips graphs joined radially") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = fixtures::random_line(6 + trial, 200, 50.0, rng);
    const auto w = analyzable_levels(z, kSixth);
    const auto x = build_rh(z, kSixth, w.lo - 1, w.hi);
    const std::size_t n = z.size();
    CHECK(x.graph.vertex_count() == n * static_cast<std::size_t>(w.hi - w.lo + 2));
    std::size_t radial = 0;
    for (int k = w.lo - 1; k <= w.hi; ++k) {
      const Graph rips = rips_graph(z, kSixth.pow(k));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          CHECK(x.graph.has_edge(x.vertex(i, k), x.vertex(j, k)) == rips.has_edge(i, j));
      if (k < w.hi) radial += n + 2 * rips.edge_count();
    }
    CHECK(count_kind(x, EdgeKind::Radial) == radial);
    CHECK(is_connected(x.graph));
  }
}

TEST_CASE("RH of two points") {
  const auto z = fixtures::line({0, 1});
  const auto x = build_rh(z, kSixth, 0, 2);
  CHECK(x.graph.vertex_count() == 6);
  CHECK(count_kind(x, EdgeKind::Horizontal) == 1);
  CHECK(count_kind(x, EdgeKind::Radial) == 4 + 2);
}

TEST_CASE("H of ULT4") {
  const auto x = build_h(fixtures::ult4(), kSixth, 0, 2);
  CHECK(x.graph.vertex_count() == 4);
  CHECK(x.level_size(0) == 1);
  CHECK(x.level_size(1) == 1);
  CHECK(x.level_size(2) == 2);
  CHECK(count_kind(x, EdgeKind::Horizontal) == 0);
  CHECK(count_kind(x, EdgeKind::Radial) == 3);
  CHECK(is_tree(x.graph));
  CHECK(x.ball[2] == std::vector<std::size_t>{0, 1});
  CHECK(x.ball[3] == std::vector<std::size_t>{2, 3});
}

TEST_CASE("H of LINE3 at level 0 is a triangle") {
  const auto x = build_h(fixtures::line3(), kSixth, 0, 0);
  CHECK(x.graph.vertex_count() == 3);
  CHECK(count_kind(x, EdgeKind::Horizontal) == 3);
  const auto metric = build_h(fixtures::line3(), kSixth, 0, 0, BallMode::Metric);
  CHECK(count_kind(metric, EdgeKind::Horizontal) == 3);
}

TEST_CASE("H over an ultrametric is a tree") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 12; ++trial) {
    const auto z = fixtures::random_ultrametric(3 + trial, rng);
    const auto w = analyzable_levels(z, kSixth);
    const auto x = build_h(z, kSixth, w.lo - 1, w.hi);
    CHECK(count_kind(x, EdgeKind::Horizontal) == 0);
    CHECK(x.level_size(w.lo - 1) == 1);
    CHECK(is_tree(x.graph));
  }
}

TEST_CASE("H balls cover every point at every level") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    const auto z = fixtures::random_graph_metric(5 + trial, rng);
    const auto w = analyzable_levels(z, kSixth);
    const auto x = build_h(z, kSixth, w.lo, w.hi);
    for (int k = w.lo; k <= w.hi; ++k) {
      std::vector<char> covered(z.size(), 0);
      for (std::size_t v = x.first_at(k); v < x.first_at(k) + x.level_size(k); ++v)
        for (std::size_t p : x.ball[v]) covered[p] = 1;
      CHECK(std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; }));
    }
  }
}

TEST_CASE("level components of RH(UNIF64) grow") {
  const auto x = build_rh(fixtures::unif64(), kSixth, 0, 3);
  const auto report = level_component_analysis(x);
  REQUIRE(report.rows.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(report.rows[i].components == 1);
  CHECK(report.rows[0].max_hop_diameter == 1);
  CHECK(report.rows[1].max_hop_diameter == 7);
  CHECK(report.rows[2].max_hop_diameter == 63);
  CHECK_FALSE(report.rows[3].analyzable);
  CHECK(report.verdict == Verdict::Growing);
}

TEST_CASE("level components of a single point") {
  const auto z = FiniteMetricSpace::validate(std::vector<double>{0.0}, 1);
  const auto report = level_component_analysis(build_rh(z, kSixth, 0, 3));
  for (const auto& row : report.rows) {
    CHECK(row.components == 1);
    CHECK(row.max_hop_diameter == 0);
  }
}

TEST_CASE("level components match breadth-first oracles") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = fixtures::random_line(8 + trial, 300, 100.0, rng);
    const auto w = analyzable_levels(z, kSixth);
    const auto report = level_component_analysis(build_rh(z, kSixth, w.lo, w.hi));
    for (const auto& row : report.rows) {
      const auto comps = oracles::eps_components(z, kSixth.pow(row.k));
      const auto hops = oracles::eps_component_max_hops(z, kSixth.pow(row.k));
      CHECK(row.components == comps.size());
      CHECK(row.max_hop_diameter == static_cast<std::int32_t>(*std::max_element(hops.begin(), hops.end())));
    }
  }
}

TEST_CASE("band connectivity agrees with level connectivity") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 6; ++trial) {
    const auto z = fixtures::random_graph_metric(6 + trial, rng);
    const auto w = analyzable_levels(z, kSixth);
    for (const auto& row : level_band_connectivity(build_rh(z, kSixth, w.lo, w.hi))) CHECK(row.agree);
  }
}

TEST_CASE("branch points sit on radial geodesics") {
  for (const auto& z : {fixtures::ult4(), fixtures::line3()}) {
    const auto w = analyzable_levels(z, kSixth);
    const auto x = build_rh(z, kSixth, w.lo - 1, w.hi + 1);
    const auto hops = hop_distances(x.graph);
    for (std::size_t a = 0; a < x.graph.vertex_count(); ++a)
      for (std::size_t b = a + 1; b < x.graph.vertex_count(); ++b) {
        const auto bp = branch_point(x, hops, a, b);
        if (!bp) continue;
        CHECK((bp->twice_product == 0 || bp->twice_product == 1));
        CHECK(hops(a, b) + 1 >= hops(a, bp->y) + hops(bp->y, b));
        CHECK(bp->geodesic_x.front() == a);
        CHECK(bp->geodesic_x.back() == bp->y);
        CHECK(bp->geodesic_x.size() == static_cast<std::size_t>(hops(a, bp->y)) + 1);
        CHECK(bp->geodesic_x2.size() == static_cast<std::size_t>(hops(b, bp->y)) + 1);
      }
  }
}

TEST_CASE("branch point of a vertex with itself") {
  const auto x = build_rh(fixtures::line3(), kSixth, -1, 1);
  const auto bp = branch_point(x, x.vertex(1, 1), x.vertex(1, 1));
  CHECK(bp.y == x.vertex(1, 1));
  CHECK(bp.twice_product == 0);
  CHECK_THROWS_AS(branch_point(build_h(fixtures::line3(), kSixth, 0, 0), 0, 1), Error);
}

TEST_CASE("RH and H are roughly isometric") {
  for (const auto& z : {fixtures::ult4(), fixtures::line3()}) {
    const auto w = analyzable_levels(z, kSixth);
    const auto report = rh_to_h_distortion(z, kSixth, w.lo - 1, w.hi + 1);
    CHECK(report.interior_pairs > 0);
    CHECK(report.max_additive <= 5);
  }
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 6; ++trial) {
    const auto z = fixtures::random_line(4 + trial, 100, 30.0, rng);
    const auto w = analyzable_levels(z, kSixth);
    const int lo = w.lo - 1, hi = std::min(w.hi + 1, lo + 5);
    CHECK(rh_to_h_distortion(z, kSixth, lo, hi).max_additive <= 5);
  }
}

TEST_CASE("pq detector verdicts") {
  const auto unif = pq_detector(fixtures::unif64(), kSeventh, 4);
  REQUIRE(unif.rows.size() == 3);
  CHECK(unif.rows[0].max_hop_diameter == 1);
  CHECK(unif.rows[1].max_hop_diameter == 7);
  CHECK(unif.rows[2].max_hop_diameter == 63);
  CHECK(unif.verdict == Verdict::Growing);
  CHECK(pq_detector(fixtures::ult4(), kSeventh, 4).verdict == Verdict::Bounded);
  const auto cantor = pq_detector(fixtures::cantor5(), kSeventh, 4);
  CHECK(cantor.verdict == Verdict::Bounded);
  CHECK(cantor.D <= 4);
}

TEST_CASE("pq detector is invariant under relabeling") {
  std::mt19937_64 rng(37);
  const auto z = fixtures::cantor5();
  const auto base = pq_detector(z, kSeventh, 4);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<std::size_t> perm(z.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto moved = pq_detector(z.permuted(perm), kSeventh, 4);
    CHECK(moved.verdict == base.verdict);
    CHECK(moved.D == base.D);
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
      CHECK(moved.rows[i].components == base.rows[i].components);
      CHECK(moved.rows[i].max_hop_diameter == base.rows[i].max_hop_diameter);
    }
  }
}
