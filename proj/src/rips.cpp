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
#include "coarse_forest/rips.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "coarse_forest/error.hpp"

namespace cforest {
namespace {

constexpr std::size_t kMaxVertices = 5'000'000;
constexpr int kLevelSearchLimit = 400;

void require_level_range(int k_min, int k_max) {
  if (k_min > k_max) throw Error(ErrorCode::InvalidArgument, "k_min must not exceed k_max");
}

void require_parameter(const Ratio& r, bool strict) {
  // 0 < r <= 1/6 (or < 1/6 when strict), decided exactly on the fraction.
  const bool positive = r.num() > 0;
  const __int128 lhs = static_cast<__int128>(r.num()) * 6;
  const __int128 rhs = r.den();
  const bool small = strict ? lhs < rhs : lhs <= rhs;
  if (!positive || !small)
    throw Error(ErrorCode::InvalidArgument,
                "parameter r = " + r.str() + (strict ? " must satisfy 0 < r < 1/6"
                                                     : " must satisfy 0 < r <= 1/6"));
}

void require_budget(std::size_t points, int k_min, int k_max) {
  const auto levels = static_cast<std::size_t>(k_max - k_min + 1);
  if (points * levels > kMaxVertices)
    throw Error(ErrorCode::BudgetExceeded,
                "construction would exceed " + std::to_string(kMaxVertices) + " vertices");
}

LevelWindow clip(LevelWindow w, int k_min, int k_max) {
  return {std::max(w.lo, k_min), std::min(w.hi, k_max)};
}

// Fixed-width bitset over the points of Z.
struct PointSet {
  std::vector<std::uint64_t> words;
  explicit PointSet(std::size_t n = 0) : words((n + 63) / 64, 0) {}
  void set(std::size_t i) { words[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words[i / 64] >> (i % 64)) & 1U; }
  bool intersects(const PointSet& o) const {
    for (std::size_t w = 0; w < words.size(); ++w)
      if (words[w] & o.words[w]) return true;
    return false;
  }
  bool subset_of(const PointSet& o) const {
    for (std::size_t w = 0; w < words.size(); ++w)
      if (words[w] & ~o.words[w]) return false;
    return true;
  }
  friend bool operator<(const PointSet& a, const PointSet& b) { return a.words < b.words; }
};

// Diameter of each horizontal component at one level.
struct LevelComponents {
  std::size_t count = 0;
  std::int32_t max_diameter = 0;
  std::vector<std::size_t> witness;
};

LevelComponents analyze_level(const LeveledGraph& x, int k) {
  const std::size_t begin = x.first_at(k), end = begin + x.level_size(k);
  std::vector<char> mask(x.graph.vertex_count(), 0);
  for (std::size_t v = begin; v < end; ++v) mask[v] = 1;
  std::vector<char> seen(x.graph.vertex_count(), 0);
  LevelComponents out;
  bool have_witness = false;
  for (std::size_t s = begin; s < end; ++s) {
    if (seen[s]) continue;
    const auto reach = bfs_hops(x.graph, s, mask);
    std::vector<std::size_t> members;
    for (std::size_t v = begin; v < end; ++v)
      if (reach[v] != kUnreachable) {
        members.push_back(v);
        seen[v] = 1;
      }
    ++out.count;
    const std::int32_t diam = hop_diameter(x.graph, members);
    if (!have_witness || diam > out.max_diameter) {
      have_witness = true;
      out.max_diameter = diam;
      out.witness.clear();
      for (std::size_t v : members) out.witness.push_back(x.flavor == Flavor::RH ? x.anchor[v] : v);
    }
  }
  return out;
}

bool strictly_increasing_run(const std::vector<LevelRow>& rows, std::size_t run) {
  std::size_t length = 0;
  std::int32_t previous = 0;
  for (const auto& row : rows) {
    if (!row.analyzable) {
      length = 0;
      continue;
    }
    length = (length > 0 && row.max_hop_diameter > previous) ? length + 1 : 1;
    previous = row.max_hop_diameter;
    if (length >= run) return true;
  }
  return false;
}

}  // namespace

const char* to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::Plain: return "plain";
    case EdgeKind::Horizontal: return "horizontal";
    case EdgeKind::Radial: return "radial";
  }
  return "plain";
}

const char* to_string(Flavor flavor) noexcept { return flavor == Flavor::H ? "h" : "rh"; }

const char* to_string(BallMode mode) noexcept {
  return mode == BallMode::Subset ? "subset" : "metric";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Bounded: return "bounded";
    case Verdict::Growing: return "growing";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LevelWindow analyzable_levels(const FiniteMetricSpace& z, const Ratio& r) {
  require_parameter(r, false);
  if (z.size() < 2) return {0, 0};
  const double top = 2.0 * z.diameter();
  const double bottom = z.min_positive_distance() / 2.0;
  int lo = 0;
  if (within(r.pow(lo), top)) {
    while (lo > -kLevelSearchLimit && within(r.pow(lo - 1), top)) --lo;
  } else {
    while (lo < kLevelSearchLimit && !within(r.pow(lo), top)) ++lo;
  }
  int hi = lo;
  while (hi < kLevelSearchLimit && at_least(r.pow(hi + 1), bottom)) ++hi;
  return {lo, hi};
}

std::size_t LeveledGraph::level_size(int k) const {
  const auto i = static_cast<std::size_t>(k - k_min);
  return level_begin[i + 1] - level_begin[i];
}

std::size_t LeveledGraph::vertex(std::size_t p, int k) const {
  if (flavor != Flavor::RH) throw Error(ErrorCode::InvalidArgument, "vertex(p, k) is defined for RH only");
  if (k < k_min || k > k_max || p >= point_count)
    throw Error(ErrorCode::InvalidArgument, "vertex outside the built range");
  return static_cast<std::size_t>(k - k_min) * point_count + p;
}

Graph rips_graph(const FiniteMetricSpace& z, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "Rips scale must be positive");
  Graph g(z.size(), z.ids());
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (within(z(i, j), t)) g.add_edge(i, j);
  return g;
}

LeveledGraph build_rh(const FiniteMetricSpace& z, const Ratio& r, int k_min, int k_max) {
  require_parameter(r, false);
  require_level_range(k_min, k_max);
  require_budget(z.size(), k_min, k_max);
  const std::size_t n = z.size();
  LeveledGraph x;
  x.r = r;
  x.flavor = Flavor::RH;
  x.k_min = k_min;
  x.k_max = k_max;
  x.point_count = n;
  x.window = clip(analyzable_levels(z, r), k_min, k_max);
  for (int k = k_min; k <= k_max; ++k) {
    x.level_begin.push_back(x.graph.vertex_count());
    for (std::size_t p = 0; p < n; ++p) {
      x.graph.add_vertex(z.ids()[p] + "@" + std::to_string(k));
      x.level.push_back(k);
      x.anchor.push_back(p);
    }
  }
  x.level_begin.push_back(x.graph.vertex_count());
  for (int k = k_min; k <= k_max; ++k) {
    const double t = r.pow(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (within(z(i, j), t)) {
          x.graph.add_edge(x.vertex(i, k), x.vertex(j, k));
          x.kind.push_back(EdgeKind::Horizontal);
        }
    if (k == k_max) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i == j || within(z(i, j), t)) {
          x.graph.add_edge(x.vertex(i, k), x.vertex(j, k + 1));
          x.kind.push_back(EdgeKind::Radial);
        }
  }
  return x;
}

LeveledGraph build_h(const FiniteMetricSpace& z, const Ratio& r, int k_min, int k_max,
                     BallMode mode) {
  require_parameter(r, false);
  require_level_range(k_min, k_max);
  require_budget(z.size(), k_min, k_max);
  const std::size_t n = z.size();
  LeveledGraph x;
  x.r = r;
  x.flavor = Flavor::H;
  x.ball_mode = mode;
  x.k_min = k_min;
  x.k_max = k_max;
  x.point_count = n;
  x.window = clip(analyzable_levels(z, r), k_min, k_max);

  std::vector<PointSet> sets;
  for (int k = k_min; k <= k_max; ++k) {
    x.level_begin.push_back(x.graph.vertex_count());
    const double radius = 2.0 * r.pow(k);
    std::map<PointSet, std::size_t> seen;
    for (std::size_t a : greedy_maximal_separated(z, r.pow(k))) {
      PointSet s(n);
      std::vector<std::size_t> members;
      for (std::size_t p = 0; p < n; ++p)
        if (within(z(a, p), radius)) {
          s.set(p);
          members.push_back(p);
        }
      if (seen.count(s)) continue;
      seen.emplace(s, x.graph.vertex_count());
      x.graph.add_vertex(z.ids()[a] + "@" + std::to_string(k));
      x.level.push_back(k);
      x.anchor.push_back(a);
      x.ball.push_back(std::move(members));
      sets.push_back(std::move(s));
    }
  }
  x.level_begin.push_back(x.graph.vertex_count());

  for (int k = k_min; k <= k_max; ++k) {
    const double rk = r.pow(k);
    const std::size_t b0 = x.first_at(k), e0 = b0 + x.level_size(k);
    for (std::size_t v = b0; v < e0; ++v)
      for (std::size_t w = v + 1; w < e0; ++w) {
        const bool meet = mode == BallMode::Subset
                              ? sets[v].intersects(sets[w])
                              : within(z(x.anchor[v], x.anchor[w]), 4.0 * rk);
        if (meet) {
          x.graph.add_edge(v, w);
          x.kind.push_back(EdgeKind::Horizontal);
        }
      }
    if (k == k_max) continue;
    const double rk1 = r.pow(k + 1);
    const std::size_t b1 = x.first_at(k + 1), e1 = b1 + x.level_size(k + 1);
    for (std::size_t v = b0; v < e0; ++v)
      for (std::size_t w = b1; w < e1; ++w) {
        const bool inside = mode == BallMode::Subset
                                ? sets[w].subset_of(sets[v])
                                : within(z(x.anchor[v], x.anchor[w]) + 2.0 * rk1, 2.0 * rk);
        if (inside) {
          x.graph.add_edge(v, w);
          x.kind.push_back(EdgeKind::Radial);
        }
      }
  }
  return x;
}

PQReport level_component_analysis(const LeveledGraph& x) {
  PQReport report;
  report.r = x.r;
  report.window = x.window;
  report.informational = x.flavor == Flavor::H;
  for (int k = x.k_min; k <= x.k_max; ++k) {
    auto level = analyze_level(x, k);
    report.rows.push_back({k, level.count, level.max_diameter, x.window.contains(k),
                           std::move(level.witness)});
  }
  std::vector<const LevelRow*> analyzed;
  for (const auto& row : report.rows)
    if (row.analyzable) analyzed.push_back(&row);
  for (const auto* row : analyzed) report.D = std::max(report.D, row->max_hop_diameter);
  if (strictly_increasing_run(report.rows, 3)) {
    report.verdict = Verdict::Growing;
  } else if (!analyzed.empty() && report.D == 0) {
    report.verdict = Verdict::Bounded;
  } else if (analyzed.size() >= 2 &&
             analyzed.back()->max_hop_diameter <= analyzed[analyzed.size() - 2]->max_hop_diameter) {
    report.verdict = Verdict::Bounded;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

std::vector<BandConnectivityRow> level_band_connectivity(const LeveledGraph& x) {
  std::vector<BandConnectivityRow> rows;
  for (int k = x.k_min; k < x.k_max; ++k) {
    const std::size_t begin = x.first_at(k);
    const std::size_t end = x.first_at(k + 1) + x.level_size(k + 1);
    std::vector<std::size_t> band(end - begin);
    std::iota(band.begin(), band.end(), begin);
    std::size_t band_count = 0;
    component_labels(x.graph.induced(band), &band_count);
    const std::size_t level_count = analyze_level(x, k).count;
    rows.push_back({k, level_count, band_count, (level_count == 1) == (band_count == 1)});
  }
  return rows;
}

namespace {

using RowFn = std::function<std::vector<std::int32_t>(std::size_t)>;

std::optional<BranchPoint> find_branch_point(const LeveledGraph& x, std::size_t a, std::size_t b,
                                             std::span<const std::int32_t> from_a,
                                             std::span<const std::int32_t> from_b,
                                             const RowFn& row_of) {
  if (x.flavor != Flavor::RH)
    throw Error(ErrorCode::InvalidArgument, "branch points are computed on RH graphs");
  const int la = x.level[a], lb = x.level[b];
  for (int m = std::min(la, lb); m >= x.k_min; --m) {
    const std::size_t begin = x.first_at(m), end = begin + x.level_size(m);
    for (std::size_t y = begin; y < end; ++y) {
      if (from_a[y] != la - m || from_b[y] != lb - m) continue;
      BranchPoint bp;
      bp.x = a;
      bp.x2 = b;
      bp.y = y;
      bp.twice_product = from_a[y] + from_b[y] - from_a[b];
      const auto to_y = row_of(y);
      auto descend = [&](std::size_t start) {
        std::vector<std::size_t> path{start};
        std::size_t c = start;
        while (c != y) {
          std::size_t next = c;
          for (const auto& inc : x.graph.neighbors(c))
            if (x.level[inc.to] == x.level[c] - 1 && to_y[inc.to] == to_y[c] - 1 &&
                (next == c || inc.to < next))
              next = inc.to;
          if (next == c) throw Error(ErrorCode::InvalidArgument, "radial descent failed");
          path.push_back(next);
          c = next;
        }
        return path;
      };
      bp.geodesic_x = descend(a);
      bp.geodesic_x2 = descend(b);
      return bp;
    }
  }
  return std::nullopt;
}

}  // namespace

BranchPoint branch_point(const LeveledGraph& x, std::size_t a, std::size_t b) {
  if (a >= x.graph.vertex_count() || b >= x.graph.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "branch point vertex out of range");
  const auto from_a = bfs_hops(x.graph, a);
  const auto from_b = bfs_hops(x.graph, b);
  auto bp = find_branch_point(x, a, b, from_a, from_b,
                              [&](std::size_t y) { return bfs_hops(x.graph, y); });
  if (!bp)
    throw Error(ErrorCode::RangeExhausted,
                "no cone point for " + x.graph.id(a) + ", " + x.graph.id(b) + " at levels >= " +
                    std::to_string(x.k_min),
                {a, b});
  return *bp;
}

std::optional<BranchPoint> branch_point(const LeveledGraph& x, const HopMatrix& hops,
                                        std::size_t a, std::size_t b) {
  return find_branch_point(x, a, b, hops.row(a), hops.row(b), [&](std::size_t y) {
    const auto row = hops.row(y);
    return std::vector<std::int32_t>(row.begin(), row.end());
  });
}

DistortionReport rh_to_h_distortion(const FiniteMetricSpace& z, const Ratio& r, int k_min,
                                    int k_max, BallMode mode) {
  const LeveledGraph rh = build_rh(z, r, k_min, k_max);
  const LeveledGraph h = build_h(z, r, k_min, k_max, mode);
  DistortionReport out;
  out.ball_mode = mode;
  out.map.resize(rh.graph.vertex_count());
  for (std::size_t v = 0; v < rh.graph.vertex_count(); ++v) {
    const int k = rh.level[v];
    const std::size_t p = rh.anchor[v];
    const std::size_t begin = h.first_at(k), end = begin + h.level_size(k);
    std::size_t image = end;
    for (std::size_t w = begin; w < end && image == end; ++w) {
      const bool holds = mode == BallMode::Subset
                             ? std::binary_search(h.ball[w].begin(), h.ball[w].end(), p)
                             : within(z(h.anchor[w], p), 2.0 * r.pow(k));
      if (holds) image = w;
    }
    if (image == end) throw Error(ErrorCode::InvalidArgument, "point not covered by any ball");
    out.map[v] = image;
  }

  // Only distances are needed below, not the branch-point geodesics.
  const auto d_rh = hop_distances(rh.graph);
  const auto d_h = hop_distances(h.graph);
  const std::size_t n = rh.graph.vertex_count();
  std::vector<DistancePair> sampled;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      ++out.pairs;
      const int la = rh.level[a], lb = rh.level[b];
      std::optional<int> cone_level;
      for (int m = std::min(la, lb); m >= k_min && !cone_level; --m) {
        const std::size_t begin = rh.first_at(m), end = begin + rh.level_size(m);
        for (std::size_t y = begin; y < end; ++y)
          if (d_rh(a, y) == la - m && d_rh(b, y) == lb - m) {
            cone_level = m;
            break;
          }
      }
      if (!cone_level || *cone_level <= k_min || *cone_level >= k_max) continue;
      ++out.interior_pairs;
      const std::int32_t source = d_rh(a, b);
      const std::int32_t target = d_h(out.map[a], out.map[b]);
      const std::int32_t gap = target == kUnreachable
                                   ? kUnreachable
                                   : (source > target ? source - target : target - source);
      if (gap > out.max_additive) {
        out.max_additive = gap;
        out.witness = {a, b};
      }
      if (target != kUnreachable) sampled.push_back({a, b, double(source), double(target)});
    }
  for (std::size_t w = 0; w < h.graph.vertex_count(); ++w) {
    std::int32_t nearest = kUnreachable;
    for (std::size_t v = 0; v < n; ++v) nearest = std::min(nearest, d_h(w, out.map[v]));
    out.codensity = std::max(out.codensity, nearest);
  }
  out.qi.lambda = 1.0;
  out.qi.additive = out.max_additive;
  out.qi.pairs = out.interior_pairs;
  out.qi.codensity = out.codensity;
  out.qi.worst_upper = out.witness;
  out.qi.worst_lower = out.witness;
  return out;
}

PQReport pq_detector(const FiniteMetricSpace& z, const Ratio& r, std::size_t bound) {
  require_parameter(r, true);
  PQReport report;
  report.r = r;
  report.bound = bound;
  report.window = analyzable_levels(z, r);
  for (int k = report.window.lo; k <= report.window.hi; ++k) {
    const auto conn = d_finitely_connected(z, r.pow(k), std::max<std::size_t>(bound, 1));
    LevelRow row;
    row.k = k;
    row.components = conn.components.size();
    for (std::size_t c = 0; c < conn.max_hops.size(); ++c) {
      const auto hops = static_cast<std::int32_t>(conn.max_hops[c]);
      if (c == 0 || hops > row.max_hop_diameter) {
        row.max_hop_diameter = hops;
        row.witness = conn.components[c];
      }
    }
    report.D = std::max(report.D, row.max_hop_diameter);
    report.rows.push_back(std::move(row));
  }
  if (report.D <= static_cast<std::int32_t>(bound))
    report.verdict = Verdict::Bounded;
  else if (strictly_increasing_run(report.rows, 3))
    report.verdict = Verdict::Growing;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

}  // namespace cforest
