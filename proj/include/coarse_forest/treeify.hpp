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
#ifndef COARSE_FOREST_TREEIFY_HPP
#define COARSE_FOREST_TREEIFY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarse_forest/gamma.hpp"
#include "coarse_forest/graph.hpp"
#include "coarse_forest/metric.hpp"

namespace cforest {

// Longest cycle of the fundamental basis of a breadth-first spanning tree
// rooted at vertex 0 (neighbors visited in ascending order). 0 for forests.
std::size_t loop_bound(const Graph& x);

struct Rescaled {
  std::vector<double> values;
  double factor = 1.0;  // c
  double expansion = 0.0;  // rho_f(L) before scaling
  std::size_t L = 1;
};

// c = 1 / (5 max(rho_f(L), 1)); L = 0 is treated as 1.
Rescaled rescale(std::span<const double> f, const Graph& x, std::size_t L);

// X with every closed R-ball about a in A coned off, R = 3L, A a greedy
// maximal L-separated vertex set. Y vertices 0..n-1 are the base vertices,
// followed by one cone vertex per center.
struct ConedComplex {
  Graph y;
  std::size_t base_count = 0;
  std::vector<std::size_t> centers;
  std::vector<std::size_t> cone_vertex;
  // (cone vertex, u, w) for every base edge (u, w) inside the coned ball.
  std::vector<std::array<std::size_t, 3>> triangles;
  std::size_t L = 1;
  double R = 3.0;
};

ConedComplex cone_complex(const Graph& x, std::size_t L);

inline constexpr double kPerturbation = 0.125;

// Moves a value within 1/8 of an integer to distance exactly 1/8 from it,
// away from the integer on the side it already occupies; integers move up.
double perturb_value(double value);

struct PerturbedFunction {
  std::vector<double> values;  // per Y vertex, never an integer
};

// f is given on base vertices; cone vertices copy their center's value.
PerturbedFunction perturb(const ConedComplex& y, std::span<const double> f);

struct Crossing {
  std::size_t edge = 0;
  long level = 0;
  double t = 0.0;  // position along edge (u -> v), in (0, 1)
};

// The level sets of the perturbed function over the integers, cut into
// crossings on edges and joined through triangles into tracks, together with
// the complementary regions.
struct TrackSystem {
  std::vector<Crossing> crossings;
  // Crossings of edge e occupy [first_crossing[e], first_crossing[e + 1]),
  // ordered from the edge's u end.
  std::vector<std::size_t> first_crossing;
  std::vector<std::size_t> track;  // component per crossing
  std::size_t track_count = 0;
  // Edge pieces between consecutive crossings: edge e has
  // (#crossings on e + 1) segments starting at first_segment[e].
  std::vector<std::size_t> first_segment;
  std::vector<std::size_t> region;  // region per segment
  std::vector<std::size_t> vertex_region;  // region per Y vertex
  std::size_t region_count = 0;
  // Region below and above each track (lower / higher function values).
  std::vector<std::pair<std::size_t, std::size_t>> incident_regions;
  // Tracks whose crossings disagree about their incident regions.
  std::size_t inconsistent_tracks = 0;
};

TrackSystem extract_tracks(const ConedComplex& y, const PerturbedFunction& f);

struct Representative {
  // A Y vertex in the region, or else an edge segment (edge, segment index).
  std::optional<std::size_t> vertex;
  std::size_t edge = 0;
  std::size_t segment = 0;
};

struct QuotientTree {
  Graph tree;
  std::vector<std::size_t> pi;            // Y vertex -> T vertex
  std::vector<std::size_t> edge_of_track; // track -> T edge
  std::vector<Representative> vertex_rep; // T vertex -> preimage representative
  std::vector<std::size_t> edge_rep;      // T edge -> a crossing of its track
};

// Regions become T vertices and tracks become T edges. Throws NotATree when
// a track has a single incident region, two tracks join the same regions or
// the result is not a tree.
QuotientTree quotient(const ConedComplex& y, const TrackSystem& tracks);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct TreeifyOptions {
  // Trusted loop bound; computed with loop_bound() when absent.
  std::optional<std::size_t> L;
  double properness_half_width = 1.0;
  std::size_t pair_budget = kDefaultPairBudget;
  std::uint64_t seed = kDefaultSeed;
};

struct TreeifyResult {
  std::size_t L = 0;
  Rescaled scaled;
  ConedComplex coned;
  PerturbedFunction perturbed;
  TrackSystem tracks;
  QuotientTree quotient;
  QIReport qi;  // pi restricted to base vertices, Y metric -> T metric
  ExpansionProfile expansion;
  PropernessProfile properness;
  std::vector<StageTiming> timings;
  // Set when the input was a metric space discretized first.
  std::optional<GammaGraph> gamma;
};

TreeifyResult treeify(const Graph& x, std::span<const double> f,
                      const TreeifyOptions& options = {});

// Discretizes z at scale R, pulls f back along j and runs the graph pipeline
// on the discretization.
TreeifyResult treeify(const FiniteMetricSpace& z, std::span<const double> f, double R,
                      const TreeifyOptions& options = {});

}  // namespace cforest

#endif  // COARSE_FOREST_TREEIFY_HPP
