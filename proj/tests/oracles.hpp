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
// Brute-force reference computations. These avoid the library's algorithms
// and use only the raw distance matrix or adjacency of their inputs.
#ifndef COARSE_FOREST_TESTS_ORACLES_HPP
#define COARSE_FOREST_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "coarse_forest/graph.hpp"
#include "coarse_forest/metric.hpp"

namespace oracles {

using cforest::FiniteMetricSpace;
using cforest::Graph;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
using Matrix = std::vector<std::vector<double>>;

// Minimax cost over every simple chain, by exhaustive depth-first search.
inline Matrix minimax_all_chains(const FiniteMetricSpace& z) {
  const std::size_t n = z.size();
  Matrix best(n, std::vector<double>(n, kInf));
  std::vector<char> used(n, 0);
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t start, std::size_t at,
                                                                    double cost) {
    best[start][at] = std::min(best[start][at], cost);
    for (std::size_t next = 0; next < n; ++next) {
      if (used[next]) continue;
      used[next] = 1;
      walk(start, next, std::max(cost, z(at, next)));
      used[next] = 0;
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    used[s] = 1;
    walk(s, s, 0.0);
    used[s] = 0;
  }
  return best;
}

// Hop counts on the graph with a step wherever d <= eps; -1 when unreachable.
inline std::vector<std::vector<int>> eps_hops(const FiniteMetricSpace& z, double eps) {
  const std::size_t n = z.size();
  std::vector<std::vector<int>> hops(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    hops[s][s] = 0;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w = 0; w < n; ++w)
        if (hops[s][w] < 0 && z(v, w) <= eps) {
          hops[s][w] = hops[s][v] + 1;
          queue.push_back(w);
        }
    }
  }
  return hops;
}

inline std::vector<std::vector<std::size_t>> eps_components(const FiniteMetricSpace& z, double eps) {
  const auto hops = eps_hops(z, eps);
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<char> placed(z.size(), 0);
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (placed[s]) continue;
    blocks.emplace_back();
    for (std::size_t v = 0; v < z.size(); ++v)
      if (hops[s][v] >= 0) {
        blocks.back().push_back(v);
        placed[v] = 1;
      }
  }
  return blocks;
}

// Max pairwise hop count within each eps-component, in component order.
inline std::vector<std::size_t> eps_component_max_hops(const FiniteMetricSpace& z, double eps) {
  const auto hops = eps_hops(z, eps);
  std::vector<std::size_t> out;
  for (const auto& block : eps_components(z, eps)) {
    int worst = 0;
    for (std::size_t a : block)
      for (std::size_t b : block) worst = std::max(worst, hops[a][b]);
    out.push_back(static_cast<std::size_t>(worst));
  }
  return out;
}

inline Matrix floyd_warshall(const Graph& g) {
  const std::size_t n = g.vertex_count();
  Matrix d(n, std::vector<double>(n, kInf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0.0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = std::min(d[e.u][e.v], e.length);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline double four_point(const Graph& g) {
  const auto d = floyd_warshall(g);
  const std::size_t n = g.vertex_count();
  double delta = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t w = 0; w < n; ++w) {
          double s[3] = {d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]};
          std::sort(s, s + 3);
          delta = std::max(delta, (s[2] - s[1]) / 2.0);
        }
  return delta;
}

// Bottleneck constant by explicit ball deletion in the barycentric
// subdivision: for each pair and each exact midpoint, the least radius whose
// open ball disconnects the pair, capped by d(x, y) / 2.
inline double bottleneck(const Graph& g) {
  const std::size_t n = g.vertex_count(), m = g.edge_count();
  Graph sub(n + m);
  for (std::size_t e = 0; e < m; ++e) {
    sub.add_edge(g.edge(e).u, n + e);
    sub.add_edge(n + e, g.edge(e).v);
  }
  const auto d = floyd_warshall(sub);
  const std::size_t total = n + m;
  auto connected_without = [&](std::size_t x, std::size_t y, std::size_t mid, double radius) {
    std::vector<char> seen(total, 0);
    std::deque<std::size_t> queue;
    if (d[mid][x] < radius) return false;
    queue.push_back(x);
    seen[x] = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      if (v == y) return true;
      for (const auto& inc : sub.neighbors(v))
        if (!seen[inc.to] && d[mid][inc.to] >= radius) {
          seen[inc.to] = 1;
          queue.push_back(inc.to);
        }
    }
    return false;
  };
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const double half = d[x][y] / 2.0;
      double pair = half;
      for (std::size_t mid = 0; mid < total; ++mid) {
        if (d[x][mid] != half || d[y][mid] != half) continue;
        for (double radius = 0.0; radius < pair; radius += 1.0)
          if (!connected_without(x, y, mid, radius)) {
            pair = radius;
            break;
          }
      }
      worst = std::max(worst, pair);
    }
  return worst / 2.0;
}

// Maximum over band centers of the hop diameter of band components, with
// components found by flood fill and diameters by Floyd-Warshall on the band.
inline int properness_max(const Graph& g, const std::vector<double>& f, double half_width, double step) {
  const std::size_t n = g.vertex_count();
  const double lo = *std::min_element(f.begin(), f.end());
  const double hi = *std::max_element(f.begin(), f.end());
  int worst = 0;
  for (double center = lo; center <= hi; center += step) {
    std::vector<std::size_t> band;
    for (std::size_t v = 0; v < n; ++v)
      if (center - half_width <= f[v] && f[v] <= center + half_width) band.push_back(v);
    const auto d = floyd_warshall(g.induced(band));
    for (std::size_t i = 0; i < band.size(); ++i)
      for (std::size_t j = 0; j < band.size(); ++j)
        if (d[i][j] < kInf) worst = std::max(worst, static_cast<int>(d[i][j]));
  }
  return worst;
}

// Longest fundamental cycle of the breadth-first tree from vertex 0 that
// visits neighbors in ascending order; cycles measured through ancestor sets.
inline std::size_t fundamental_cycle_max(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<std::size_t> parent(n, n);
  std::vector<char> seen(n, 0);
  std::set<std::pair<std::size_t, std::size_t>> tree;
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        tree.insert({std::min(v, w), std::max(v, w)});
        queue.push_back(w);
      }
  }
  auto ancestors = [&](std::size_t v) {
    std::vector<std::size_t> chain{v};
    while (parent[chain.back()] != n) chain.push_back(parent[chain.back()]);
    return chain;
  };
  std::size_t longest = 0;
  for (const auto& e : g.edges()) {
    if (tree.count({std::min(e.u, e.v), std::max(e.u, e.v)})) continue;
    const auto au = ancestors(e.u), av = ancestors(e.v);
    for (std::size_t i = 0; i < au.size(); ++i) {
      const auto it = std::find(av.begin(), av.end(), au[i]);
      if (it != av.end()) {
        longest = std::max(longest, i + static_cast<std::size_t>(it - av.begin()) + 1);
        break;
      }
    }
  }
  return longest;
}

inline bool is_ultrametric(const FiniteMetricSpace& z) {
  for (std::size_t x = 0; x < z.size(); ++x)
    for (std::size_t y = 0; y < z.size(); ++y)
      for (std::size_t w = 0; w < z.size(); ++w)
        if (z(x, y) > std::max(z(x, w), z(w, y))) return false;
  return true;
}

}  // namespace oracles

#endif  // COARSE_FOREST_TESTS_ORACLES_HPP
