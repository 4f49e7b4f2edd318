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
#ifndef COARSE_FOREST_GRAPH_HPP
#define COARSE_FOREST_GRAPH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cforest {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 1.0;
};

struct Incidence {
  std::size_t to = 0;
  std::size_t edge = 0;
};

// Undirected simple graph with positive edge lengths.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n, std::vector<std::string> ids = {});

  std::size_t add_vertex(std::string id = {});
  // Rejects self-loops, repeated pairs and non-positive lengths.
  std::size_t add_edge(std::size_t u, std::size_t v, double length = 1.0);

  std::size_t vertex_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  std::span<const Incidence> neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }
  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const;
  bool has_edge(std::size_t u, std::size_t v) const { return find_edge(u, v).has_value(); }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t v) const { return ids_[v]; }

  // True when every edge has the same length (breadth-first search applies).
  bool uniform_lengths() const noexcept;
  bool unit_lengths() const noexcept;

  // Subgraph induced on the given vertices; vertex i of the result is
  // vertices[i].
  Graph induced(std::span<const std::size_t> vertices) const;

 private:
  static std::uint64_t key(std::size_t u, std::size_t v) noexcept;

  std::vector<std::string> ids_;
  std::vector<std::vector<Incidence>> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

inline constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Square matrix stored row-major.
template <typename T>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<T> values;

  SquareMatrix() = default;
  SquareMatrix(std::size_t size, T fill) : n(size), values(size * size, fill) {}
  T& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  std::span<const T> row(std::size_t i) const { return {values.data() + i * n, n}; }
};

using HopMatrix = SquareMatrix<std::int32_t>;
using DistanceMatrix = SquareMatrix<double>;

// Hop counts from one vertex, ignoring lengths. kUnreachable where unreached.
// When `allowed` is non-empty only vertices with allowed[v] are traversed.
std::vector<std::int32_t> bfs_hops(const Graph& g, std::size_t source,
                                   std::span<const char> allowed = {});
HopMatrix hop_distances(const Graph& g);

// Weighted single-source distances (priority-queue relaxation).
std::vector<double> shortest_paths(const Graph& g, std::size_t source);
// Breadth-first search when all lengths agree, Dijkstra otherwise.
DistanceMatrix all_pairs_distances(const Graph& g);

// Component label per vertex, labels dense and ordered by smallest member.
std::vector<std::size_t> component_labels(const Graph& g, std::size_t* count = nullptr);
bool is_connected(const Graph& g);
bool is_forest(const Graph& g);
bool is_tree(const Graph& g);

// Largest finite hop distance inside the vertex set, traversing only it.
std::int32_t hop_diameter(const Graph& g, std::span<const std::size_t> vertices);

inline constexpr std::uint64_t kDefaultSeed = 0x6a09e667f3bcc908ULL;
inline constexpr std::size_t kDefaultQuadrupleBudget = 20'000'000;
inline constexpr std::size_t kDefaultPairBudget = 1'000'000;

struct FourPointResult {
  double delta = 0.0;
  bool exhaustive = true;
  std::size_t samples = 0;
  std::uint64_t seed = kDefaultSeed;
  std::array<std::size_t, 4> witness{0, 0, 0, 0};
};

// Four-point hyperbolicity constant: over quadruples, half the gap between
// the largest and second largest of the three pair sums. Exhaustive when
// n^4 <= budget, otherwise `budget` uniformly random quadruples.
FourPointResult four_point_delta(const Graph& g,
                                 std::size_t sample_budget = kDefaultQuadrupleBudget,
                                 std::uint64_t seed = kDefaultSeed);

struct BottleneckResult {
  // In units of the input graph's edges; a multiple of 1/2.
  double delta = 0.0;
  bool exhaustive = true;
  std::size_t pairs = 0;
  std::uint64_t seed = kDefaultSeed;
  std::pair<std::size_t, std::size_t> witness{0, 0};
};

// Least half-integer Delta such that every sampled pair (x, y) has a midpoint
// m (a vertex of the barycentric subdivision) for which deleting the open
// Delta-ball about m separates x from y, or d(x, y) <= 2 Delta.
// Requires a connected graph with unit lengths.
BottleneckResult bottleneck_delta(const Graph& g,
                                  std::size_t sample_budget = kDefaultPairBudget,
                                  std::uint64_t seed = kDefaultSeed);

struct ExpansionProfile {
  // (t, max |f(u) - f(v)| over pairs at path distance <= t), sorted by t.
  std::vector<std::pair<double, double>> samples;
  bool bornologous = true;
  double at(double t) const;
};

ExpansionProfile expansion_profile(const Graph& g, std::span<const double> f,
                                   std::span<const double> thresholds);

enum class BandMode { Closed, Open };

struct PropernessRow {
  double center = 0.0;
  std::size_t component = 0;
  std::size_t vertices = 0;
  std::int32_t hop_diameter = 0;
};

struct PropernessProfile {
  double half_width = 0.0;
  double step = 0.0;
  BandMode mode = BandMode::Closed;
  std::vector<PropernessRow> rows;
  std::int32_t max_diameter = 0;
};

// For band centers min f, min f + step, ... up to max f, lists the components
// of the subgraph induced on {v : f(v) in [x - N, x + N]} with their hop
// diameters (measured inside the band).
PropernessProfile properness_profile(const Graph& g, std::span<const double> f,
                                     double half_width, double step,
                                     BandMode mode = BandMode::Closed);

struct DistancePair {
  std::size_t a = 0;
  std::size_t b = 0;
  double source = 0.0;
  double target = 0.0;
};

struct QIReport {
  double lambda = 1.0;
  double additive = 0.0;
  double codensity = 0.0;
  std::size_t pairs = 0;
  bool exhaustive = true;
  std::uint64_t seed = kDefaultSeed;
  // The lower bound d_s / lambda - C is non-positive on every sampled pair:
  // the fit carries no information and the map is not certified.
  bool degenerate = false;
  std::pair<std::size_t, std::size_t> worst_upper{0, 0};
  std::pair<std::size_t, std::size_t> worst_lower{0, 0};
};

inline constexpr double kLambdaGridStep = 0.125;
inline constexpr double kLambdaGridMax = 64.0;

// Minimal (lambda, C) with d_s / lambda - C <= d_t <= lambda d_s + C over the
// pairs. For each lambda = 1 + i/8 up to 64 the smallest C is computed; the
// reported lambda minimises lambda + C (ties to the smaller lambda).
QIReport fit_quasi_isometry(std::span<const DistancePair> pairs);

// Quasi-isometry constants of map: source vertex -> target vertex. Both
// graphs must be connected.
QIReport qi_estimate(std::span<const std::size_t> map, const Graph& source,
                     const Graph& target,
                     std::size_t sample_budget = kDefaultPairBudget,
                     std::uint64_t seed = kDefaultSeed);

}  // namespace cforest

#endif  // COARSE_FOREST_GRAPH_HPP
