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
#ifndef COARSE_FOREST_RIPS_HPP
#define COARSE_FOREST_RIPS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse_forest/graph.hpp"
#include "coarse_forest/metric.hpp"
#include "coarse_forest/scale.hpp"

namespace cforest {

enum class EdgeKind { Plain, Horizontal, Radial };
enum class Flavor { H, RH };

// How ball relations of the H construction are decided over a finite space:
// Subset compares the finite point sets {z : d(a, z) <= 2 r^k}; Metric uses
// d(v, v') <= 4 r^k for intersection and d(v, v') + 2 r^(k+1) <= 2 r^k for
// containment.
enum class BallMode { Subset, Metric };

const char* to_string(EdgeKind kind) noexcept;
const char* to_string(Flavor flavor) noexcept;
const char* to_string(BallMode mode) noexcept;

struct LevelWindow {
  int lo = 0;
  int hi = 0;
  bool contains(int k) const noexcept { return lo <= k && k <= hi; }
};

// Levels k with r^k in [min positive distance / 2, 2 diameter]; outside this
// window the per-level structure no longer changes. A single point yields
// [0, 0].
LevelWindow analyzable_levels(const FiniteMetricSpace& z, const Ratio& r);

// Graph with integer levels on vertices and horizontal/radial edge tags.
// Vertices are stored level by level, coarsest (k_min) first.
struct LeveledGraph {
  Graph graph;
  std::vector<int> level;
  std::vector<EdgeKind> kind;
  // Point of Z behind each vertex: the point itself for RH, the ball center
  // for H.
  std::vector<std::size_t> anchor;
  // H only: member points of each vertex's ball, sorted.
  std::vector<std::vector<std::size_t>> ball;
  // level_begin[k - k_min] is the first vertex of level k; one extra entry.
  std::vector<std::size_t> level_begin;
  Ratio r;
  Flavor flavor = Flavor::RH;
  BallMode ball_mode = BallMode::Subset;
  int k_min = 0;
  int k_max = 0;
  // Analyzable window of Z clipped to [k_min, k_max]; empty when lo > hi.
  LevelWindow window;
  std::size_t point_count = 0;

  std::size_t level_size(int k) const;
  std::size_t first_at(int k) const { return level_begin[k - k_min]; }
  // RH only: vertex for point p at level k.
  std::size_t vertex(std::size_t p, int k) const;
};

// Rips graph: an edge between every pair at distance <= t.
Graph rips_graph(const FiniteMetricSpace& z, double t);

// Rips-graph hyperbolic approximation: one vertex per (point, level).
// Horizontal edges at level k between points at distance <= r^k, radial edges
// x_k -- x'_(k+1) when d(x, x') <= r^k. Requires 0 < r <= 1/6.
LeveledGraph build_rh(const FiniteMetricSpace& z, const Ratio& r, int k_min, int k_max);

// Ball hyperbolic approximation over greedy maximal r^k-separated nets with
// balls of radius 2 r^k; equal balls at one level are one vertex.
LeveledGraph build_h(const FiniteMetricSpace& z, const Ratio& r, int k_min, int k_max,
                     BallMode mode = BallMode::Subset);

enum class Verdict { Bounded, Growing, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct LevelRow {
  int k = 0;
  std::size_t components = 0;
  std::int32_t max_hop_diameter = 0;
  bool analyzable = true;
  // Members (point ids for RH, vertex indices for H) of one component
  // attaining max_hop_diameter.
  std::vector<std::size_t> witness;
};

struct PQReport {
  Ratio r;
  std::vector<LevelRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  std::int32_t D = 0;
  std::size_t bound = 0;  // the hypothesis bound tested, pq_detector only
  LevelWindow window;
  bool informational = false;
};

// Components of each level's horizontal subgraph with their hop diameters.
// Verdict over the analyzable window: Growing when D_k strictly increases
// across at least 3 consecutive levels, Bounded when the two finest levels do
// not increase, Inconclusive otherwise. H input is marked informational.
PQReport level_component_analysis(const LeveledGraph& x);

// For every level k in range with k + 1 in range, compares connectivity of
// l^-1(k) with that of the band l^-1([k, k + 1]).
struct BandConnectivityRow {
  int k = 0;
  std::size_t level_components = 0;
  std::size_t band_components = 0;
  bool agree = true;
};
std::vector<BandConnectivityRow> level_band_connectivity(const LeveledGraph& x);

struct BranchPoint {
  std::size_t x = 0;
  std::size_t x2 = 0;
  std::size_t y = 0;
  // 2 (x|x')_y = |xy| + |yx'| - |xx'|.
  std::int32_t twice_product = 0;
  double gromov_product() const noexcept { return twice_product / 2.0; }
  std::vector<std::size_t> geodesic_x;   // x ... y
  std::vector<std::size_t> geodesic_x2;  // x' ... y
};

// Highest-level cone point of {x, x'}: a vertex y with l(y) <= min(l(x),
// l(x')) joined to both by radial geodesics, i.e. |xy| = l(x) - l(y) and
// |x'y| = l(x') - l(y). RH only. Throws RangeExhausted when the built range
// holds no cone point.
BranchPoint branch_point(const LeveledGraph& x, std::size_t a, std::size_t b);
// Same, reusing a precomputed hop matrix of x.graph.
std::optional<BranchPoint> branch_point(const LeveledGraph& x, const HopMatrix& hops,
                                        std::size_t a, std::size_t b);

struct DistortionReport {
  std::int32_t max_additive = 0;
  std::size_t pairs = 0;
  std::size_t interior_pairs = 0;
  std::pair<std::size_t, std::size_t> witness{0, 0};
  // F: RH vertex -> H vertex (lowest-index level-k vertex whose ball holds the
  // point).
  std::vector<std::size_t> map;
  std::int32_t codensity = 0;
  QIReport qi;
  BallMode ball_mode = BallMode::Subset;
};

// Additive distortion of F: RH(Z) -> H(Z) over interior pairs, i.e. pairs
// whose branch point lies strictly inside (k_min, k_max).
DistortionReport rh_to_h_distortion(const FiniteMetricSpace& z, const Ratio& r,
                                    int k_min, int k_max,
                                    BallMode mode = BallMode::Subset);

// D-finite r^k-connectivity at every analyzable level. Bounded when every
// level's maximum chain hop count is <= bound; Growing when the maxima
// strictly increase across at least 3 consecutive levels; Inconclusive
// otherwise. Requires 0 < r < 1/6.
PQReport pq_detector(const FiniteMetricSpace& z, const Ratio& r, std::size_t bound);

}  // namespace cforest

#endif  // COARSE_FOREST_RIPS_HPP
