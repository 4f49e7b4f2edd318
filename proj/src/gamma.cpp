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
#include "coarse_forest/gamma.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "coarse_forest/error.hpp"
#include "coarse_forest/scale.hpp"

namespace cforest {
namespace {

GammaGraph discretize(DistanceMatrix d, const std::vector<std::string>& ids, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale R must be positive");
  const std::size_t n = d.n;
  GammaGraph out;
  out.R = R;
  for (std::size_t p = 0; p < n; ++p) {
    const bool separated = std::all_of(out.centers.begin(), out.centers.end(),
                                       [&](std::size_t a) { return at_least(d(a, p), R); });
    if (separated) out.centers.push_back(p);
  }
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t a : out.centers) {
    std::vector<std::size_t> members;
    for (std::size_t p = 0; p < n; ++p)
      if (within(d(a, p), 2.0 * R)) members.push_back(p);
    if (seen.count(members)) continue;
    seen.emplace(members, out.graph.vertex_count());
    out.graph.add_vertex(ids.empty() ? std::to_string(a) : ids[a]);
    out.j.push_back(a);
    out.ball.push_back(std::move(members));
  }
  const std::size_t m = out.graph.vertex_count();
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t w = v + 1; w < m; ++w) {
      const auto& a = out.ball[v];
      const auto& b = out.ball[w];
      std::size_t i = 0, k = 0;
      bool meet = false;
      while (i < a.size() && k < b.size() && !meet) {
        if (a[i] == b[k]) meet = true;
        else if (a[i] < b[k]) ++i;
        else ++k;
      }
      if (meet) out.graph.add_edge(v, w);
    }
  out.source_distance = std::move(d);
  return out;
}

}  // namespace

GammaGraph build_gamma(const Graph& x, double R) {
  if (!is_connected(x)) throw Error(ErrorCode::Disconnected, "input graph is not connected");
  return discretize(all_pairs_distances(x), x.ids(), R);
}

GammaGraph build_gamma(const FiniteMetricSpace& z, double R) {
  DistanceMatrix d(z.size(), 0.0);
  std::copy(z.data().begin(), z.data().end(), d.values.begin());
  return discretize(std::move(d), z.ids(), R);
}

GammaCheck verify_gamma_qi(const GammaGraph& gamma) {
  if (!is_connected(gamma.graph))
    throw Error(ErrorCode::Disconnected, "Gamma graph is not connected");
  const auto hops = hop_distances(gamma.graph);
  const double R = gamma.R;
  const std::size_t m = gamma.graph.vertex_count();
  GammaCheck out;
  std::vector<DistancePair> pairs;
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t w = v + 1; w < m; ++w) {
      ++out.pairs;
      const double h = hops(v, w);
      const double d = gamma.source_distance(gamma.j[v], gamma.j[w]);
      const bool upper = !within(d, 4.0 * R * h);
      const bool lower = !within(R * h - R, d);
      if (upper) ++out.upper_violations;
      if (lower) ++out.lower_violations;
      if (upper || lower) out.violating.emplace_back(v, w);
      pairs.push_back({v, w, h, d});
    }
  const std::size_t n = gamma.source_distance.n;
  for (std::size_t p = 0; p < n; ++p) {
    double nearest = kInfinity;
    for (std::size_t a : gamma.j) nearest = std::min(nearest, gamma.source_distance(p, a));
    out.codensity = std::max(out.codensity, nearest);
  }
  out.codensity_ok = within(out.codensity, 2.0 * R);
  out.qi = fit_quasi_isometry(pairs);
  out.qi.codensity = out.codensity;
  return out;
}

std::vector<double> induce_hat_f(const GammaGraph& gamma, std::span<const double> f) {
  if (f.size() != gamma.source_distance.n)
    throw Error(ErrorCode::InvalidArgument, "f must have one value per source point");
  std::vector<double> out;
  out.reserve(gamma.j.size());
  for (std::size_t a : gamma.j) out.push_back(f[a]);
  return out;
}

}  // namespace cforest
