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
#include "coarse_forest/treeify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>
#include <string>

#include "coarse_forest/error.hpp"
#include "coarse_forest/scale.hpp"
#include "coarse_forest/union_find.hpp"

namespace cforest {
namespace {

void require_connected(const Graph& x, const char* what) {
  if (x.vertex_count() == 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty graph");
  if (!is_connected(x)) throw Error(ErrorCode::Disconnected, std::string(what) + ": graph is not connected");
}

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<StageTiming>& sink) : sink_(sink) {}
  void lap(std::string stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({std::move(stage), std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

std::size_t loop_bound(const Graph& x) {
  require_connected(x, "loop_bound");
  const std::size_t n = x.vertex_count();
  std::vector<std::size_t> parent(n, n), depth(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<char> tree_edge(x.edge_count(), 0);
  std::queue<std::size_t> queue;
  queue.push(0);
  seen[0] = 1;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop();
    std::vector<Incidence> order(x.neighbors(v).begin(), x.neighbors(v).end());
    std::sort(order.begin(), order.end(),
              [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
    for (const auto& inc : order) {
      if (seen[inc.to]) continue;
      seen[inc.to] = 1;
      parent[inc.to] = v;
      depth[inc.to] = depth[v] + 1;
      tree_edge[inc.edge] = 1;
      queue.push(inc.to);
    }
  }
  std::size_t longest = 0;
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    if (tree_edge[e]) continue;
    std::size_t a = x.edge(e).u, b = x.edge(e).v, length = 1;
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      a = parent[a];
      ++length;
    }
    longest = std::max(longest, length);
  }
  return longest;
}

Rescaled rescale(std::span<const double> f, const Graph& x, std::size_t L) {
  if (f.size() != x.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "f must have one value per vertex");
  Rescaled out;
  out.L = std::max<std::size_t>(L, 1);
  const auto reach = static_cast<std::int32_t>(out.L);
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    const auto hops = bfs_hops(x, v);
    for (std::size_t w = 0; w < x.vertex_count(); ++w)
      if (hops[w] <= reach) out.expansion = std::max(out.expansion, std::abs(f[v] - f[w]));
  }
  out.factor = 1.0 / (5.0 * std::max(out.expansion, 1.0));
  out.values.reserve(f.size());
  for (double value : f) out.values.push_back(out.factor * value);
  return out;
}

ConedComplex cone_complex(const Graph& x, std::size_t L) {
  require_connected(x, "cone_complex");
  ConedComplex out;
  out.L = std::max<std::size_t>(L, 1);
  out.R = 3.0 * static_cast<double>(out.L);
  out.base_count = x.vertex_count();
  out.y = x;
  const auto hops = hop_distances(x);
  const auto separation = static_cast<std::int32_t>(out.L);
  for (std::size_t p = 0; p < x.vertex_count(); ++p) {
    const bool separated = std::all_of(out.centers.begin(), out.centers.end(),
                                       [&](std::size_t a) { return hops(a, p) >= separation; });
    if (separated) out.centers.push_back(p);
  }
  const auto radius = static_cast<std::int32_t>(3 * out.L);
  for (std::size_t a : out.centers) {
    const std::size_t cone = out.y.add_vertex("cone:" + x.id(a));
    out.cone_vertex.push_back(cone);
    std::vector<char> inside(x.vertex_count(), 0);
    for (std::size_t u = 0; u < x.vertex_count(); ++u)
      if (hops(a, u) <= radius) {
        inside[u] = 1;
        out.y.add_edge(cone, u, out.R);
      }
    for (const auto& e : x.edges())
      if (inside[e.u] && inside[e.v]) out.triangles.push_back({cone, e.u, e.v});
  }
  return out;
}

double perturb_value(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "function value is not finite");
  const double nearest = std::round(value);
  const double offset = value - nearest;
  if (std::abs(offset) >= kPerturbation) return value;
  return offset < 0.0 ? nearest - kPerturbation : nearest + kPerturbation;
}

PerturbedFunction perturb(const ConedComplex& y, std::span<const double> f) {
  if (f.size() != y.base_count)
    throw Error(ErrorCode::InvalidArgument, "f must have one value per base vertex");
  PerturbedFunction out;
  out.values.resize(y.y.vertex_count());
  for (std::size_t v = 0; v < y.base_count; ++v) out.values[v] = perturb_value(f[v]);
  for (std::size_t i = 0; i < y.centers.size(); ++i)
    out.values[y.cone_vertex[i]] = out.values[y.centers[i]];
  return out;
}

TrackSystem extract_tracks(const ConedComplex& y, const PerturbedFunction& f) {
  const Graph& g = y.y;
  if (f.values.size() != g.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "perturbed function must cover every Y vertex");
  for (double v : f.values)
    if (v == std::floor(v)) throw Error(ErrorCode::InvalidArgument, "perturbed value is an integer");
  TrackSystem out;
  const std::size_t m = g.edge_count();

  out.first_crossing.reserve(m + 1);
  for (std::size_t e = 0; e < m; ++e) {
    out.first_crossing.push_back(out.crossings.size());
    const double fu = f.values[g.edge(e).u], fv = f.values[g.edge(e).v];
    const auto lo = static_cast<long>(std::ceil(std::min(fu, fv)));
    const auto hi = static_cast<long>(std::floor(std::max(fu, fv)));
    if (fu < fv) {
      for (long n = lo; n <= hi; ++n) out.crossings.push_back({e, n, (n - fu) / (fv - fu)});
    } else {
      for (long n = hi; n >= lo; --n) out.crossings.push_back({e, n, (n - fu) / (fv - fu)});
    }
  }
  out.first_crossing.push_back(out.crossings.size());

  out.first_segment.reserve(m + 1);
  std::size_t segments = 0;
  for (std::size_t e = 0; e < m; ++e) {
    out.first_segment.push_back(segments);
    segments += out.first_crossing[e + 1] - out.first_crossing[e] + 1;
  }
  out.first_segment.push_back(segments);

  // Crossing of edge e at level n, if any.
  auto crossing_at = [&](std::size_t e, long n) -> std::optional<std::size_t> {
    for (std::size_t c = out.first_crossing[e]; c < out.first_crossing[e + 1]; ++c)
      if (out.crossings[c].level == n) return c;
    return std::nullopt;
  };
  // Segment of edge e lying in the band (n, n + 1).
  auto segment_in_band = [&](std::size_t e, long n) -> std::optional<std::size_t> {
    const double fu = f.values[g.edge(e).u], fv = f.values[g.edge(e).v];
    if (std::max(fu, fv) < n || std::min(fu, fv) > n + 1) return std::nullopt;
    const auto low_band = static_cast<long>(std::floor(std::min(fu, fv)));
    const auto high_band = static_cast<long>(std::floor(std::max(fu, fv)));
    if (n < low_band || n > high_band) return std::nullopt;
    const std::size_t steps = fu < fv ? static_cast<std::size_t>(n - low_band)
                                      : static_cast<std::size_t>(high_band - n);
    return out.first_segment[e] + steps;
  };

  UnionFind tracks(out.crossings.size());
  UnionFind regions(segments + g.vertex_count());
  for (const auto& tri : y.triangles) {
    const std::array<std::size_t, 3> edges{*g.find_edge(tri[0], tri[1]), *g.find_edge(tri[0], tri[2]),
                                           *g.find_edge(tri[1], tri[2])};
    std::array<double, 3> values{f.values[tri[0]], f.values[tri[1]], f.values[tri[2]]};
    const auto lo = static_cast<long>(std::floor(*std::min_element(values.begin(), values.end())));
    const auto hi = static_cast<long>(std::floor(*std::max_element(values.begin(), values.end())));
    for (long n = lo; n <= hi; ++n) {
      std::optional<std::size_t> first_track, first_region;
      for (std::size_t e : edges) {
        if (n > lo) {
          if (auto c = crossing_at(e, n)) {
            if (first_track) tracks.unite(*first_track, *c);
            else first_track = c;
          }
        }
        if (auto s = segment_in_band(e, n)) {
          if (first_region) regions.unite(*first_region, *s);
          else first_region = s;
        }
      }
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    regions.unite(segments + g.edge(e).u, out.first_segment[e]);
    regions.unite(segments + g.edge(e).v, out.first_segment[e + 1] - 1);
  }

  out.track = tracks.labels(&out.track_count);
  const auto labels = regions.labels(&out.region_count);
  out.region.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(segments));
  out.vertex_region.assign(labels.begin() + static_cast<std::ptrdiff_t>(segments), labels.end());

  const std::size_t unset = UnionFind::npos;
  out.incident_regions.assign(out.track_count, {unset, unset});
  for (std::size_t e = 0; e < m; ++e) {
    const bool ascending = f.values[g.edge(e).u] < f.values[g.edge(e).v];
    for (std::size_t c = out.first_crossing[e]; c < out.first_crossing[e + 1]; ++c) {
      const std::size_t s = out.first_segment[e] + (c - out.first_crossing[e]);
      std::pair<std::size_t, std::size_t> sides{out.region[s], out.region[s + 1]};
      if (!ascending) std::swap(sides.first, sides.second);
      auto& known = out.incident_regions[out.track[c]];
      if (known.first == unset) known = sides;
      else if (known != sides) ++out.inconsistent_tracks;
    }
  }
  return out;
}

QuotientTree quotient(const ConedComplex& y, const TrackSystem& tracks) {
  const Graph& g = y.y;
  if (tracks.inconsistent_tracks > 0)
    throw Error(ErrorCode::NotATree, std::to_string(tracks.inconsistent_tracks) +
                                         " tracks meet more than two regions");
  QuotientTree out;
  out.tree = Graph(tracks.region_count);
  out.vertex_rep.assign(tracks.region_count, Representative{});
  std::vector<char> have(tracks.region_count, 0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const std::size_t r = tracks.vertex_region[v];
    if (!have[r]) {
      have[r] = 1;
      out.vertex_rep[r].vertex = v;
    }
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (std::size_t s = tracks.first_segment[e]; s < tracks.first_segment[e + 1]; ++s) {
      const std::size_t r = tracks.region[s];
      if (have[r]) continue;
      have[r] = 1;
      out.vertex_rep[r].edge = e;
      out.vertex_rep[r].segment = s - tracks.first_segment[e];
    }

  std::vector<std::size_t> first_of(tracks.track_count, UnionFind::npos);
  for (std::size_t c = 0; c < tracks.crossings.size(); ++c)
    if (first_of[tracks.track[c]] == UnionFind::npos) first_of[tracks.track[c]] = c;
  out.edge_of_track.resize(tracks.track_count);
  for (std::size_t t = 0; t < tracks.track_count; ++t) {
    const auto [low, high] = tracks.incident_regions[t];
    if (low == high)
      throw Error(ErrorCode::NotATree, "track " + std::to_string(t) + " does not separate",
                  {first_of[t]});
    if (out.tree.has_edge(low, high))
      throw Error(ErrorCode::NotATree, "two tracks join the same regions", {low, high});
    out.edge_of_track[t] = out.tree.add_edge(low, high);
    out.edge_rep.push_back(first_of[t]);
  }
  if (!is_tree(out.tree)) throw Error(ErrorCode::NotATree, "quotient contains a cycle or is disconnected");
  out.pi = tracks.vertex_region;
  return out;
}

TreeifyResult treeify(const Graph& x, std::span<const double> f, const TreeifyOptions& options) {
  require_connected(x, "treeify");
  if (f.size() != x.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "f must have one value per vertex");
  TreeifyResult out;
  Stopwatch clock(out.timings);
  out.L = options.L ? *options.L : loop_bound(x);
  clock.lap("loop_bound");
  out.scaled = rescale(f, x, out.L);
  clock.lap("rescale");
  out.coned = cone_complex(x, out.L);
  clock.lap("cone_complex");
  out.perturbed = perturb(out.coned, out.scaled.values);
  clock.lap("perturb");
  out.tracks = extract_tracks(out.coned, out.perturbed);
  clock.lap("extract_tracks");
  out.quotient = quotient(out.coned, out.tracks);
  clock.lap("quotient");

  const std::size_t n = x.vertex_count();
  if (n * (n - 1) / 2 > options.pair_budget)
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(n) + " base vertices exceed the pair budget of " +
                    std::to_string(options.pair_budget));
  const auto& pi = out.quotient.pi;
  const auto dt = hop_distances(out.quotient.tree);
  std::vector<std::vector<double>> dy(n);
  for (std::size_t a = 0; a < n; ++a) dy[a] = shortest_paths(out.coned.y, a);
  std::vector<DistancePair> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      pairs.push_back({a, b, dy[a][b], static_cast<double>(dt(pi[a], pi[b]))});
  out.qi = fit_quasi_isometry(pairs);
  out.qi.seed = options.seed;
  for (std::size_t t = 0; t < out.quotient.tree.vertex_count(); ++t) {
    std::int32_t nearest = kUnreachable;
    for (std::size_t a = 0; a < n; ++a) nearest = std::min(nearest, dt(t, pi[a]));
    out.qi.codensity = std::max(out.qi.codensity, static_cast<double>(nearest));
  }
  clock.lap("quasi_isometry");

  std::vector<double> thresholds;
  for (std::size_t t = 1; t <= out.scaled.L; ++t) thresholds.push_back(static_cast<double>(t));
  thresholds.push_back(out.coned.R);
  out.expansion = expansion_profile(x, f, thresholds);
  out.properness = properness_profile(x, f, options.properness_half_width, 1.0);
  clock.lap("diagnostics");
  return out;
}

TreeifyResult treeify(const FiniteMetricSpace& z, std::span<const double> f, double R,
                      const TreeifyOptions& options) {
  GammaGraph gamma = build_gamma(z, R);
  const auto hat_f = induce_hat_f(gamma, f);
  if (!is_connected(gamma.graph))
    throw Error(ErrorCode::Disconnected, "discretization at this scale is not connected");
  TreeifyResult out = treeify(gamma.graph, hat_f, options);
  out.gamma = std::move(gamma);
  return out;
}

}  // namespace cforest
