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
#include "coarse_forest/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "coarse_forest/error.hpp"
#include "coarse_forest/scale.hpp"
#include "coarse_forest/union_find.hpp"
#include "parallel.hpp"

namespace cforest {

Graph::Graph(std::size_t n, std::vector<std::string> ids) : ids_(std::move(ids)), adj_(n) {
  if (ids_.empty()) {
    ids_.resize(n);
    for (std::size_t i = 0; i < n; ++i) ids_[i] = std::to_string(i);
  }
  if (ids_.size() != n) throw Error(ErrorCode::InvalidArgument, "vertex id count mismatch");
}

std::size_t Graph::add_vertex(std::string id) {
  if (id.empty()) id = std::to_string(adj_.size());
  ids_.push_back(std::move(id));
  adj_.emplace_back();
  return adj_.size() - 1;
}

std::uint64_t Graph::key(std::size_t u, std::size_t v) noexcept {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

std::size_t Graph::add_edge(std::size_t u, std::size_t v, double length) {
  if (u >= adj_.size() || v >= adj_.size())
    throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
  if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loop at vertex " + ids_[u], {u});
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(ErrorCode::InvalidArgument, "edge length must be positive and finite", {u, v});
  const auto [it, inserted] = edge_index_.emplace(key(u, v), edges_.size());
  if (!inserted)
    throw Error(ErrorCode::InvalidArgument, "repeated edge " + ids_[u] + " -- " + ids_[v], {u, v});
  edges_.push_back({u, v, length});
  adj_[u].push_back({v, it->second});
  adj_[v].push_back({u, it->second});
  return it->second;
}

std::optional<std::size_t> Graph::find_edge(std::size_t u, std::size_t v) const {
  const auto it = edge_index_.find(key(u, v));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

bool Graph::uniform_lengths() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return e.length == edges_.front().length; });
}

bool Graph::unit_lengths() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.length == 1.0; });
}

Graph Graph::induced(std::span<const std::size_t> vertices) const {
  std::vector<std::size_t> local(adj_.size(), static_cast<std::size_t>(-1));
  std::vector<std::string> ids;
  ids.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    local[vertices[i]] = i;
    ids.push_back(ids_[vertices[i]]);
  }
  Graph sub(vertices.size(), std::move(ids));
  for (const auto& e : edges_)
    if (local[e.u] != static_cast<std::size_t>(-1) && local[e.v] != static_cast<std::size_t>(-1))
      sub.add_edge(local[e.u], local[e.v], e.length);
  return sub;
}

std::vector<std::int32_t> bfs_hops(const Graph& g, std::size_t source,
                                   std::span<const char> allowed) {
  std::vector<std::int32_t> hops(g.vertex_count(), kUnreachable);
  if (!allowed.empty() && !allowed[source]) return hops;
  std::vector<std::size_t> queue;
  queue.reserve(g.vertex_count());
  queue.push_back(source);
  hops[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (const auto& inc : g.neighbors(v)) {
      if (hops[inc.to] != kUnreachable) continue;
      if (!allowed.empty() && !allowed[inc.to]) continue;
      hops[inc.to] = hops[v] + 1;
      queue.push_back(inc.to);
    }
  }
  return hops;
}

HopMatrix hop_distances(const Graph& g) {
  const std::size_t n = g.vertex_count();
  HopMatrix m(n, kUnreachable);
  detail::parallel_chunks(n, detail::thread_count(), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const auto row = bfs_hops(g, s);
      std::copy(row.begin(), row.end(), m.values.begin() + static_cast<std::ptrdiff_t>(s * n));
    }
  });
  return m;
}

std::vector<double> shortest_paths(const Graph& g, std::size_t source) {
  std::vector<double> dist(g.vertex_count(), kInfinity);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& inc : g.neighbors(v)) {
      const double nd = d + g.edge(inc.edge).length;
      if (nd < dist[inc.to]) {
        dist[inc.to] = nd;
        heap.emplace(nd, inc.to);
      }
    }
  }
  return dist;
}

DistanceMatrix all_pairs_distances(const Graph& g) {
  const std::size_t n = g.vertex_count();
  DistanceMatrix m(n, kInfinity);
  const bool uniform = g.uniform_lengths();
  const double unit = g.edge_count() ? g.edges().front().length : 1.0;
  detail::parallel_chunks(n, detail::thread_count(), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      if (uniform) {
        const auto hops = bfs_hops(g, s);
        for (std::size_t t = 0; t < n; ++t)
          if (hops[t] != kUnreachable) m(s, t) = unit * hops[t];
      } else {
        const auto row = shortest_paths(g, s);
        std::copy(row.begin(), row.end(), m.values.begin() + static_cast<std::ptrdiff_t>(s * n));
      }
    }
  });
  return m;
}

std::vector<std::size_t> component_labels(const Graph& g, std::size_t* count) {
  UnionFind uf(g.vertex_count());
  for (const auto& e : g.edges()) uf.unite(e.u, e.v);
  return uf.labels(count);
}

bool is_connected(const Graph& g) {
  std::size_t count = 0;
  component_labels(g, &count);
  return count <= 1;
}

bool is_forest(const Graph& g) {
  std::size_t count = 0;
  component_labels(g, &count);
  return g.edge_count() + count == g.vertex_count();
}

bool is_tree(const Graph& g) { return g.vertex_count() > 0 && is_connected(g) && is_forest(g); }

std::int32_t hop_diameter(const Graph& g, std::span<const std::size_t> vertices) {
  std::vector<char> mask(g.vertex_count(), 0);
  for (std::size_t v : vertices) mask[v] = 1;
  std::int32_t diam = 0;
  for (std::size_t s : vertices) {
    const auto hops = bfs_hops(g, s, mask);
    for (std::size_t t : vertices)
      if (hops[t] != kUnreachable) diam = std::max(diam, hops[t]);
  }
  return diam;
}

namespace {

constexpr std::size_t kSampleBlock = 4096;

// Independent stream per fixed-size block of samples, so the sample set does
// not depend on how blocks are spread over threads.
std::mt19937_64 block_engine(std::uint64_t seed, std::size_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

void require_connected(const Graph& g, const char* what) {
  if (!is_connected(g))
    throw Error(ErrorCode::Disconnected, std::string(what) + " requires a connected graph");
}

double four_point_value(const DistanceMatrix& d, std::size_t x, std::size_t y, std::size_t z,
                        std::size_t w) {
  double s[3] = {d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)};
  std::sort(s, s + 3);
  return (s[2] - s[1]) / 2.0;
}

}  // namespace

FourPointResult four_point_delta(const Graph& g, std::size_t budget, std::uint64_t seed) {
  require_connected(g, "four_point_delta");
  const std::size_t n = g.vertex_count();
  FourPointResult out;
  out.seed = seed;
  if (n < 4) {
    out.samples = 0;
    return out;
  }
  const auto d = all_pairs_distances(g);
  const double n4 = std::pow(static_cast<double>(n), 4.0);
  out.exhaustive = n4 <= static_cast<double>(budget);
  const std::size_t workers = detail::thread_count();
  struct Best {
    double delta = 0.0;
    std::array<std::size_t, 4> w{0, 0, 0, 0};
    std::size_t count = 0;
  };
  std::vector<Best> best(workers);
  auto consider = [](Best& b, double v, std::array<std::size_t, 4> q) {
    ++b.count;
    if (v > b.delta || (v == b.delta && v > 0.0 && q < b.w)) {
      b.delta = v;
      b.w = q;
    }
  };
  if (out.exhaustive) {
    detail::parallel_chunks(n, workers, [&](std::size_t w, std::size_t b, std::size_t e) {
      for (std::size_t x = b; x < e; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
          for (std::size_t z = y + 1; z < n; ++z)
            for (std::size_t v = z + 1; v < n; ++v)
              consider(best[w], four_point_value(d, x, y, z, v), {x, y, z, v});
    });
  } else {
    const std::size_t blocks = (budget + kSampleBlock - 1) / kSampleBlock;
    detail::parallel_chunks(blocks, workers, [&](std::size_t w, std::size_t b, std::size_t e) {
      for (std::size_t blk = b; blk < e; ++blk) {
        auto rng = block_engine(seed, blk);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const std::size_t count = std::min(kSampleBlock, budget - blk * kSampleBlock);
        for (std::size_t s = 0; s < count; ++s) {
          std::array<std::size_t, 4> q{pick(rng), pick(rng), pick(rng), pick(rng)};
          consider(best[w], four_point_value(d, q[0], q[1], q[2], q[3]), q);
        }
      }
    });
  }
  for (const auto& b : best) {
    out.samples += b.count;
    if (b.delta > out.delta || (b.delta == out.delta && b.delta > 0.0 && b.w < out.witness)) {
      out.delta = b.delta;
      out.witness = b.w;
    }
  }
  return out;
}

BottleneckResult bottleneck_delta(const Graph& g, std::size_t budget, std::uint64_t seed) {
  require_connected(g, "bottleneck_delta");
  if (!g.unit_lengths())
    throw Error(ErrorCode::InvalidArgument, "bottleneck_delta requires unit edge lengths");
  const std::size_t n = g.vertex_count();
  const std::size_t m = g.edge_count();

  // Barycentric subdivision: vertex n + e is the midpoint of edge e. Every
  // distance doubles, so half-integer radii become integers.
  Graph sub(n + m);
  for (std::size_t e = 0; e < m; ++e) {
    sub.add_edge(g.edge(e).u, n + e);
    sub.add_edge(n + e, g.edge(e).v);
  }
  const auto d = hop_distances(sub);
  const std::size_t total = n + m;

  // Vertices of the subdivision sorted by decreasing distance from each
  // candidate midpoint.
  std::vector<std::vector<std::size_t>> order(total);
  for (std::size_t mid = 0; mid < total; ++mid) {
    auto& o = order[mid];
    o.resize(total);
    std::iota(o.begin(), o.end(), std::size_t{0});
    std::stable_sort(o.begin(), o.end(),
                     [&](std::size_t a, std::size_t b) { return d(mid, a) > d(mid, b); });
  }

  BottleneckResult out;
  out.seed = seed;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  out.exhaustive = static_cast<double>(n) * n <= static_cast<double>(budget);
  if (out.exhaustive) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
  } else {
    const std::size_t blocks = (budget + kSampleBlock - 1) / kSampleBlock;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      auto rng = block_engine(seed, blk);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t count = std::min(kSampleBlock, budget - blk * kSampleBlock);
      for (std::size_t s = 0; s < count; ++s) {
        std::size_t x = pick(rng), y = pick(rng);
        if (x != y) pairs.emplace_back(std::min(x, y), std::max(x, y));
      }
    }
  }
  out.pairs = pairs.size();

  const std::size_t workers = detail::thread_count();
  struct Best {
    std::int32_t delta2 = 0;
    std::pair<std::size_t, std::size_t> pair{0, 0};
  };
  std::vector<Best> best(workers);
  detail::parallel_chunks(pairs.size(), workers, [&](std::size_t w, std::size_t b, std::size_t e) {
    UnionFind uf(total);
    std::vector<char> active(total, 0);
    for (std::size_t i = b; i < e; ++i) {
      const auto [x, y] = pairs[i];
      const std::int32_t dxy = d(x, y);
      const std::int32_t half = dxy / 2;
      std::int32_t pair_delta = half;  // d(x, y) <= 2 Delta always suffices
      for (std::size_t mid = 0; mid < total && pair_delta > 0; ++mid) {
        if (d(x, mid) != half || d(y, mid) != half) continue;
        // Widest path from x to y where a vertex's width is its distance to
        // mid: add vertices farthest-first until x and y meet.
        uf = UnionFind(total);
        std::fill(active.begin(), active.end(), 0);
        std::int32_t widest = 0;
        for (std::size_t v : order[mid]) {
          active[v] = 1;
          for (const auto& inc : sub.neighbors(v))
            if (active[inc.to]) uf.unite(v, inc.to);
          if (active[x] && active[y] && uf.same(x, y)) {
            widest = d(mid, v);
            break;
          }
        }
        pair_delta = std::min(pair_delta, widest + 1);
      }
      if (pair_delta > best[w].delta2) best[w] = {pair_delta, {x, y}};
    }
  });
  std::int32_t delta2 = 0;
  for (const auto& b : best)
    if (b.delta2 > delta2 || (b.delta2 == delta2 && delta2 > 0 && b.pair < out.witness)) {
      delta2 = b.delta2;
      out.witness = b.pair;
    }
  out.delta = delta2 / 2.0;
  return out;
}

double ExpansionProfile::at(double t) const {
  double v = 0.0;
  for (const auto& [threshold, rho] : samples)
    if (threshold <= t) v = rho;
  return v;
}

ExpansionProfile expansion_profile(const Graph& g, std::span<const double> f,
                                   std::span<const double> thresholds) {
  if (f.size() != g.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "function must have one value per vertex");
  std::vector<double> ts(thresholds.begin(), thresholds.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  ExpansionProfile out;
  out.samples.reserve(ts.size());
  for (double t : ts) out.samples.emplace_back(t, 0.0);
  if (ts.empty()) return out;
  const auto d = all_pairs_distances(g);
  const std::size_t n = g.vertex_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(i, j) == kInfinity) continue;
      const auto first = std::find_if(ts.begin(), ts.end(), [&](double t) { return within(d(i, j), t); });
      if (first == ts.end()) continue;
      auto& slot = out.samples[static_cast<std::size_t>(first - ts.begin())].second;
      slot = std::max(slot, std::abs(f[i] - f[j]));
    }
  for (std::size_t k = 1; k < out.samples.size(); ++k)
    out.samples[k].second = std::max(out.samples[k].second, out.samples[k - 1].second);
  out.bornologous = std::all_of(out.samples.begin(), out.samples.end(),
                                [](const auto& s) { return std::isfinite(s.second); });
  return out;
}

PropernessProfile properness_profile(const Graph& g, std::span<const double> f,
                                     double half_width, double step, BandMode mode) {
  if (f.size() != g.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "function must have one value per vertex");
  if (!(half_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "band half-width must be positive");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "band step must be positive");
  PropernessProfile out;
  out.half_width = half_width;
  out.step = step;
  out.mode = mode;
  if (f.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(f.begin(), f.end());
  const double lo = *lo_it, hi = *hi_it;
  const std::size_t n = g.vertex_count();
  std::vector<char> mask(n);
  for (std::size_t i = 0;; ++i) {
    const double center = lo + static_cast<double>(i) * step;
    if (center > hi) break;
    for (std::size_t v = 0; v < n; ++v) {
      const double a = center - half_width, b = center + half_width;
      mask[v] = mode == BandMode::Closed ? (a <= f[v] && f[v] <= b) : (a < f[v] && f[v] < b);
    }
    std::vector<char> seen(n, 0);
    std::size_t component = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!mask[s] || seen[s]) continue;
      const auto reach = bfs_hops(g, s, mask);
      std::vector<std::size_t> members;
      for (std::size_t v = 0; v < n; ++v)
        if (reach[v] != kUnreachable) {
          members.push_back(v);
          seen[v] = 1;
        }
      const std::int32_t diam = hop_diameter(g, members);
      out.rows.push_back({center, component++, members.size(), diam});
      out.max_diameter = std::max(out.max_diameter, diam);
    }
  }
  return out;
}

QIReport fit_quasi_isometry(std::span<const DistancePair> raw) {
  QIReport out;
  out.pairs = raw.size();
  // Distinct (source, target) distance pairs decide the fit.
  std::vector<DistancePair> pairs(raw.begin(), raw.end());
  std::stable_sort(pairs.begin(), pairs.end(), [](const DistancePair& a, const DistancePair& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const DistancePair& a, const DistancePair& b) {
                            return a.source == b.source && a.target == b.target;
                          }),
              pairs.end());
  double max_source = 0.0;
  for (const auto& p : pairs) max_source = std::max(max_source, p.source);

  double best_score = kInfinity;
  const auto steps = static_cast<std::size_t>((kLambdaGridMax - 1.0) / kLambdaGridStep);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double lambda = 1.0 + static_cast<double>(i) * kLambdaGridStep;
    double c = 0.0;
    std::pair<std::size_t, std::size_t> up{0, 0}, low{0, 0};
    double up_gap = 0.0, low_gap = 0.0;
    for (const auto& p : pairs) {
      const double over = p.target - lambda * p.source;
      const double under = p.source / lambda - p.target;
      if (over > up_gap) {
        up_gap = over;
        up = {p.a, p.b};
      }
      if (under > low_gap) {
        low_gap = under;
        low = {p.a, p.b};
      }
    }
    c = std::max(up_gap, low_gap);
    if (lambda + c < best_score - 1e-12) {
      best_score = lambda + c;
      out.lambda = lambda;
      out.additive = c;
      out.worst_upper = up;
      out.worst_lower = low;
    }
  }
  out.degenerate = max_source > 0.0 && out.additive >= max_source / out.lambda - 1e-12;
  return out;
}

QIReport qi_estimate(std::span<const std::size_t> map, const Graph& source, const Graph& target,
                     std::size_t budget, std::uint64_t seed) {
  if (map.size() != source.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "map must be total on source vertices");
  for (std::size_t v : map)
    if (v >= target.vertex_count()) throw Error(ErrorCode::InvalidArgument, "map image out of range");
  require_connected(source, "qi_estimate (source)");
  require_connected(target, "qi_estimate (target)");
  const auto ds = all_pairs_distances(source);
  const auto dt = all_pairs_distances(target);
  const std::size_t n = source.vertex_count();

  std::vector<DistancePair> pairs;
  const bool exhaustive = static_cast<double>(n) * n <= static_cast<double>(budget);
  if (exhaustive) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({a, b, ds(a, b), dt(map[a], map[b])});
  } else {
    const std::size_t blocks = (budget + kSampleBlock - 1) / kSampleBlock;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      auto rng = block_engine(seed, blk);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t count = std::min(kSampleBlock, budget - blk * kSampleBlock);
      for (std::size_t s = 0; s < count; ++s) {
        const std::size_t a = pick(rng), b = pick(rng);
        pairs.push_back({a, b, ds(a, b), dt(map[a], map[b])});
      }
    }
  }
  QIReport out = fit_quasi_isometry(pairs);
  out.exhaustive = exhaustive;
  out.seed = seed;
  for (std::size_t t = 0; t < target.vertex_count(); ++t) {
    double nearest = kInfinity;
    for (std::size_t a = 0; a < n; ++a) nearest = std::min(nearest, dt(t, map[a]));
    out.codensity = std::max(out.codensity, nearest);
  }
  return out;
}

}  // namespace cforest
