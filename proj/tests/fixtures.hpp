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
// Named spaces and graphs shared by the unit and acceptance tests. Distances
// are formed as integer / denominator so each entry is correctly rounded.
#ifndef COARSE_FOREST_TESTS_FIXTURES_HPP
#define COARSE_FOREST_TESTS_FIXTURES_HPP

#include <cstdint>
#include <cstdlib>
#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "coarse_forest/graph.hpp"
#include "coarse_forest/metric.hpp"

namespace fixtures {

using cforest::FiniteMetricSpace;
using cforest::Graph;

// Points m_i / den on the real line.
inline FiniteMetricSpace line(const std::vector<std::int64_t>& m, double den = 1.0,
                              std::vector<std::string> ids = {}) {
  const std::size_t n = m.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = static_cast<double>(std::llabs(m[i] - m[j])) / den;
  return FiniteMetricSpace::validate(std::move(d), n, std::move(ids));
}

inline FiniteMetricSpace line3() { return line({0, 1, 3}); }

inline FiniteMetricSpace ult4() {
  const double near = 1.0 / 36.0, far = 1.0 / 6.0;
  return FiniteMetricSpace::validate({{0, near, far, far}, {near, 0, far, far}, {far, far, 0, near}, {far, far, near, 0}},
                                     {"a", "b", "c", "d"});
}

// The 64 endpoints of the fifth stage of the middle-thirds construction.
inline std::vector<std::int64_t> cantor5_numerators() {
  std::vector<std::int64_t> m;
  for (int code = 0; code < 32; ++code) {
    std::int64_t left = 0, place = 81;
    for (int digit = 4; digit >= 0; --digit, place /= 3)
      if ((code >> digit) & 1) left += 2 * place;
    m.push_back(left);
    m.push_back(left + 1);
  }
  std::sort(m.begin(), m.end());
  return m;
}

inline FiniteMetricSpace cantor5() { return line(cantor5_numerators(), 243.0); }

inline FiniteMetricSpace unif(std::size_t n) {
  std::vector<std::int64_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::int64_t>(i);
  return line(m, static_cast<double>(n - 1));
}

inline FiniteMetricSpace unif64() { return unif(64); }

inline Graph path(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle(std::size_t n) {
  Graph g = path(n);
  g.add_edge(n - 1, 0);
  return g;
}

// 2 x k ladder; vertex rail * k + rung.
inline Graph ladder(std::size_t k) {
  Graph g(2 * k);
  for (std::size_t rail = 0; rail < 2; ++rail)
    for (std::size_t rung = 0; rung + 1 < k; ++rung) g.add_edge(rail * k + rung, rail * k + rung + 1);
  for (std::size_t rung = 0; rung < k; ++rung) g.add_edge(rung, k + rung);
  return g;
}

inline std::vector<double> rung_index(std::size_t k) {
  std::vector<double> f(2 * k);
  for (std::size_t v = 0; v < 2 * k; ++v) f[v] = static_cast<double>(v % k);
  return f;
}

// k x k grid; vertex row * k + col.
inline Graph grid(std::size_t k) {
  Graph g(k * k);
  for (std::size_t row = 0; row < k; ++row)
    for (std::size_t col = 0; col < k; ++col) {
      const std::size_t v = row * k + col;
      if (col + 1 < k) g.add_edge(v, v + 1);
      if (row + 1 < k) g.add_edge(v, v + k);
    }
  return g;
}

inline std::vector<double> column_index(std::size_t k) {
  std::vector<double> f(k * k);
  for (std::size_t v = 0; v < k * k; ++v) f[v] = static_cast<double>(v % k);
  return f;
}

inline Graph star(std::size_t legs, std::size_t length) {
  Graph g(1);
  for (std::size_t leg = 0; leg < legs; ++leg) {
    std::size_t previous = 0;
    for (std::size_t i = 0; i < length; ++i) {
      const std::size_t v = g.add_vertex(std::to_string(g.vertex_count()));
      g.add_edge(previous, v);
      previous = v;
    }
  }
  return g;
}

inline Graph complete(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline std::vector<double> identity(std::size_t n) {
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<double>(i);
  return f;
}

// Uniform random labelled tree (random parent among earlier vertices).
inline Graph random_tree(std::size_t n, std::mt19937_64& rng) {
  Graph g(n);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    g.add_edge(pick(rng), v);
  }
  return g;
}

// Random tree plus `extra` random chords.
inline Graph random_connected(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  Graph g = random_tree(n, rng);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t tries = 0, added = 0; added < extra && tries < 50 * (extra + 1); ++tries) {
    const std::size_t u = pick(rng), v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    g.add_edge(u, v);
    ++added;
  }
  return g;
}

// Distinct random integer points on a line, scaled by den.
inline FiniteMetricSpace random_line(std::size_t n, std::int64_t span, double den, std::mt19937_64& rng) {
  std::vector<std::int64_t> m;
  std::uniform_int_distribution<std::int64_t> pick(0, span);
  while (m.size() < n) {
    const std::int64_t x = pick(rng);
    if (std::find(m.begin(), m.end(), x) == m.end()) m.push_back(x);
  }
  return line(m, den);
}

// Shortest-path metric of a random connected graph with integer lengths.
inline FiniteMetricSpace random_graph_metric(std::size_t n, std::mt19937_64& rng) {
  Graph g = random_tree(n, rng);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t u = pick(rng), v = pick(rng);
    if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
  }
  Graph weighted(n);
  std::uniform_int_distribution<int> len(1, 9);
  for (const auto& e : g.edges()) weighted.add_edge(e.u, e.v, len(rng));
  const auto d = cforest::all_pairs_distances(weighted);
  return FiniteMetricSpace::validate(d.values, n);
}

// Random ultrametric: heights of a random binary merge tree.
inline FiniteMetricSpace random_ultrametric(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  std::vector<double> d(n * n, 0.0);
  double height = 0.0;
  std::uniform_int_distribution<int> step(1, 4);
  while (clusters.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, clusters.size() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    height += step(rng);
    for (std::size_t x : clusters[a])
      for (std::size_t y : clusters[b]) d[x * n + y] = d[y * n + x] = height;
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
  }
  return FiniteMetricSpace::validate(std::move(d), n);
}

}  // namespace fixtures

#endif  // COARSE_FOREST_TESTS_FIXTURES_HPP
