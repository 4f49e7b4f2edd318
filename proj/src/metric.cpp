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
#include "coarse_forest/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "coarse_forest/error.hpp"
#include "coarse_forest/scale.hpp"
#include "coarse_forest/union_find.hpp"

namespace cforest {
namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return ids;
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::validate(std::vector<double> dist, std::size_t n,
                                              std::vector<std::string> ids,
                                              double slack) {
  if (dist.size() != n * n)
    throw Error(ErrorCode::NotSquare, "distance data has " + idx(dist.size()) +
                                          " entries, expected " + idx(n) + "x" + idx(n));
  if (!ids.empty() && ids.size() != n)
    throw Error(ErrorCode::InvalidArgument, "expected " + idx(n) + " ids, got " + idx(ids.size()));
  if (ids.empty()) ids = default_ids(n);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dist[i * n + j]; };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(at(i, j)))
        throw Error(ErrorCode::NonFinite,
                    "non-finite distance at (" + idx(i) + "," + idx(j) + ")", {i, j});
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(at(i, i)) > slack)
      throw Error(ErrorCode::NonzeroDiagonal,
                  "d(" + ids[i] + "," + ids[i] + ") = " + std::to_string(at(i, i)), {i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (at(i, j) < 0.0)
        throw Error(ErrorCode::NegativeEntry,
                    "negative distance d(" + ids[i] + "," + ids[j] + ")", {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(at(i, j) - at(j, i)) > slack)
        throw Error(ErrorCode::Asymmetric,
                    "d(" + ids[i] + "," + ids[j] + ") != d(" + ids[j] + "," + ids[i] + ")",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i) {
    at(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) at(j, i) = at(i, j);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (at(i, j) == 0.0)
        throw Error(ErrorCode::DuplicatePoint,
                    "points " + ids[i] + " and " + ids[j] + " coincide", {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double direct = at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        if (direct > at(i, j) + at(j, k) + slack)
          throw Error(ErrorCode::TriangleViolation,
                      "d(" + ids[i] + "," + ids[k] + ") > d(" + ids[i] + "," + ids[j] +
                          ") + d(" + ids[j] + "," + ids[k] + ")",
                      {i, j, k});
      }
    }

  FiniteMetricSpace z;
  z.n_ = n;
  z.dist_ = std::move(dist);
  z.ids_ = std::move(ids);
  return z;
}

FiniteMetricSpace FiniteMetricSpace::validate(const std::vector<std::vector<double>>& rows,
                                              std::vector<std::string> ids, double slack) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw Error(ErrorCode::NotSquare,
                  "row " + idx(i) + " has " + idx(rows[i].size()) + " entries, expected " + idx(n),
                  {i});
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return validate(std::move(flat), n, std::move(ids), slack);
}

double FiniteMetricSpace::diameter() const noexcept {
  double d = 0.0;
  for (double v : dist_) d = std::max(d, v);
  return d;
}

double FiniteMetricSpace::min_positive_distance() const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) d = std::min(d, (*this)(i, j));
  return n_ < 2 ? 0.0 : d;
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> index) const {
  FiniteMetricSpace z;
  z.n_ = index.size();
  z.dist_.resize(z.n_ * z.n_);
  z.ids_.resize(z.n_);
  for (std::size_t a = 0; a < z.n_; ++a) {
    if (index[a] >= n_) throw Error(ErrorCode::InvalidArgument, "subspace index out of range");
    z.ids_[a] = ids_[index[a]];
    for (std::size_t b = 0; b < z.n_; ++b) z.dist_[a * z.n_ + b] = (*this)(index[a], index[b]);
  }
  for (std::size_t a = 0; a < z.n_; ++a)
    for (std::size_t b = a + 1; b < z.n_; ++b)
      if (index[a] == index[b])
        throw Error(ErrorCode::DuplicatePoint, "subspace repeats a point", {a, b});
  return z;
}

FiniteMetricSpace FiniteMetricSpace::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
  return subspace(perm);
}

FiniteMetricSpace from_points(const std::vector<std::vector<double>>& points,
                              PointMetric metric, std::vector<std::string> ids) {
  const std::size_t n = points.size();
  const std::size_t dim = n ? points.front().size() : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (points[i].size() != dim)
      throw Error(ErrorCode::Parse, "point " + idx(i) + " has dimension " +
                                        idx(points[i].size()) + ", expected " + idx(dim), {i});
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = std::abs(points[i][c] - points[j][c]);
        d = metric == PointMetric::Euclidean ? d + diff * diff : std::max(d, diff);
      }
      if (metric == PointMetric::Euclidean) d = std::sqrt(d);
      dist[i * n + j] = dist[j * n + i] = d;
    }
  return FiniteMetricSpace::validate(std::move(dist), n, std::move(ids));
}

UltrametricCheck is_ultrametric(const FiniteMetricSpace& z) {
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!within(z(i, j), std::max(z(i, k), z(k, j))))
          return {false, std::array<std::size_t, 3>{i, j, k}};
      }
  return {};
}

UltrametricSpace::UltrametricSpace(FiniteMetricSpace z) : base_(std::move(z)) {
  const auto check = is_ultrametric(base_);
  if (!check.ultrametric) {
    const auto& w = *check.witness;
    throw Error(ErrorCode::InvalidArgument, "space is not ultrametric",
                {w[0], w[1], w[2]});
  }
}

Partition epsilon_components(const FiniteMetricSpace& z, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const std::size_t n = z.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (within(z(i, j), eps)) uf.unite(i, j);
  std::size_t count = 0;
  const auto label = uf.labels(&count);
  Partition blocks(count);
  for (std::size_t i = 0; i < n; ++i) blocks[label[i]].push_back(i);
  return blocks;
}

FiniteConnectivity d_finitely_connected(const FiniteMetricSpace& z, double eps,
                                        std::size_t bound) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (bound < 1) throw Error(ErrorCode::InvalidArgument, "hop bound must be at least 1");
  const std::size_t n = z.size();
  std::vector<std::vector<std::size_t>> step(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (within(z(i, j), eps)) {
        step[i].push_back(j);
        step[j].push_back(i);
      }

  FiniteConnectivity out;
  out.scale = eps;
  out.bound = bound;
  out.components = epsilon_components(z, eps);
  out.max_hops.assign(out.components.size(), 0);
  out.worst.scale = eps;
  out.worst.chain = n ? std::vector<std::size_t>{0} : std::vector<std::size_t>{};

  std::vector<std::size_t> component_of(n);
  for (std::size_t c = 0; c < out.components.size(); ++c)
    for (std::size_t p : out.components[c]) component_of[p] = c;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> hops(n), parent(n);
  std::size_t worst = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(hops.begin(), hops.end(), kNone);
    std::deque<std::size_t> queue{s};
    hops[s] = 0;
    parent[s] = s;
    std::size_t far = s;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      if (hops[v] > hops[far] || (hops[v] == hops[far] && v < far)) far = v;
      for (std::size_t w : step[v])
        if (hops[w] == kNone) {
          hops[w] = hops[v] + 1;
          parent[w] = v;
          queue.push_back(w);
        }
    }
    auto& m = out.max_hops[component_of[s]];
    m = std::max(m, hops[far]);
    if (hops[far] > worst) {
      worst = hops[far];
      std::vector<std::size_t> chain;
      for (std::size_t v = far; v != s; v = parent[v]) chain.push_back(v);
      chain.push_back(s);
      std::reverse(chain.begin(), chain.end());
      out.worst.endpoints = {s, far};
      out.worst.chain = std::move(chain);
      out.worst.hops = worst;
    }
  }
  out.holds = std::all_of(out.max_hops.begin(), out.max_hops.end(),
                          [&](std::size_t h) { return h <= bound; });
  return out;
}

std::vector<std::size_t> greedy_maximal_separated(const FiniteMetricSpace& z,
                                                  double separation) {
  if (!(separation > 0.0))
    throw Error(ErrorCode::InvalidArgument, "separation must be positive");
  std::vector<std::size_t> chosen;
  for (std::size_t p = 0; p < z.size(); ++p) {
    const bool separated = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t a) {
      return at_least(z(a, p), separation);
    });
    if (separated) chosen.push_back(p);
  }
  return chosen;
}

UltrametricSpace subdominant_ultrametric(const FiniteMetricSpace& z) {
  const std::size_t n = z.size();
  struct MstEdge {
    double w;
    std::size_t u, v;
  };
  std::vector<MstEdge> mst;
  mst.reserve(n ? n - 1 : 0);
  // Prim on the complete graph.
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  if (n) best[0] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
    in_tree[u] = 1;
    if (round > 0) mst.push_back({best[u], std::min(from[u], u), std::max(from[u], u)});
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && z(u, v) < best[v]) {
        best[v] = z(u, v);
        from[v] = u;
      }
  }
  std::sort(mst.begin(), mst.end(), [](const MstEdge& a, const MstEdge& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });

  // Kruskal-order merge: every pair first joined by an edge of weight w sits
  // at ultrametric distance w.
  std::vector<double> out(n * n, 0.0);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  UnionFind uf(n);
  for (const auto& e : mst) {
    const std::size_t a = uf.find(e.u), b = uf.find(e.v);
    for (std::size_t p : members[a])
      for (std::size_t q : members[b]) out[p * n + q] = out[q * n + p] = e.w;
    uf.unite(a, b);
    const std::size_t root = uf.find(a);
    const std::size_t other = root == a ? b : a;
    members[root].insert(members[root].end(), members[other].begin(), members[other].end());
    members[other].clear();
  }
  return UltrametricSpace(FiniteMetricSpace::validate(std::move(out), n, z.ids()));
}

ControlFit quasi_symmetry_control_estimate(const FiniteMetricSpace& z,
                                           const FiniteMetricSpace& u,
                                           std::span<const std::size_t> f,
                                           double p_max, std::size_t grid_steps) {
  const std::size_t n = z.size();
  if (u.size() != n || f.size() != n)
    throw Error(ErrorCode::InvalidArgument, "control estimate needs equal-size spaces");
  if (!(p_max >= 1.0) || grid_steps < 1)
    throw Error(ErrorCode::InvalidArgument, "control grid needs p_max >= 1 and steps >= 1");
  for (std::size_t i = 0; i < n; ++i)
    if (f[i] >= n) throw Error(ErrorCode::InvalidArgument, "correspondence index out of range");

  ControlFit fit;
  fit.p_max = p_max;
  fit.grid_steps = grid_steps;
  fit.samples.reserve(n * n * (n ? n - 1 : 0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t b = 0; b < n; ++b) {
      if (b == x) continue;
      const double target_den = u(f[x], f[b]);
      if (target_den == 0.0)
        throw Error(ErrorCode::DegenerateTriple,
                    "correspondence sends " + z.ids()[x] + " and " + z.ids()[b] +
                        " to the same point",
                    {x, b});
      for (std::size_t a = 0; a < n; ++a)
        fit.samples.emplace_back(z(x, a) / z(x, b), u(f[x], f[a]) / target_den);
    }

  auto eta1 = [](double t, double p) { return std::max(std::pow(t, p), std::pow(t, 1.0 / p)); };
  double best_q = std::numeric_limits<double>::infinity();
  double best_p = 1.0;
  for (std::size_t i = 0; i < grid_steps; ++i) {
    const double p = grid_steps == 1
                         ? 1.0
                         : std::pow(p_max, static_cast<double>(i) / static_cast<double>(grid_steps - 1));
    double q = 1.0;
    for (const auto& [t, ratio] : fit.samples)
      if (t > 0.0) q = std::max(q, ratio / eta1(t, p));
    if (q < best_q * (1.0 - 1e-12)) {
      best_q = q;
      best_p = p;
    }
  }
  fit.p = best_p;
  fit.q = best_q;
  // Residuals at the rounding level of the fit itself are not violations.
  for (const auto& [t, ratio] : fit.samples) {
    const double excess = ratio - fit.q * eta1(t, fit.p);
    if (excess > 1e-12 * std::max(1.0, ratio)) fit.max_violation = std::max(fit.max_violation, excess);
  }
  return fit;
}

}  // namespace cforest
