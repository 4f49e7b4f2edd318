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
#ifndef COARSE_FOREST_GAMMA_HPP
#define COARSE_FOREST_GAMMA_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "coarse_forest/graph.hpp"
#include "coarse_forest/metric.hpp"

namespace cforest {

// Discretization of a space at scale R: one vertex per distinct closed ball
// B(a, 2R) over a greedy maximal R-separated set A, edges between vertices
// whose balls share a point.
struct GammaGraph {
  Graph graph;
  double R = 1.0;
  std::vector<std::size_t> centers;             // A, ascending
  std::vector<std::vector<std::size_t>> ball;   // per vertex, sorted
  std::vector<std::size_t> j;                   // per vertex: generating center
  DistanceMatrix source_distance;
};

// Over the path metric of a connected unit-length graph.
GammaGraph build_gamma(const Graph& x, double R);
// Over a finite metric space. The result may be disconnected.
GammaGraph build_gamma(const FiniteMetricSpace& z, double R);

struct GammaCheck {
  std::size_t pairs = 0;
  std::size_t upper_violations = 0;  // d(j v, j v') > 4R |vv'|
  std::size_t lower_violations = 0;  // R |vv'| - R > d(j v, j v')
  std::vector<std::pair<std::size_t, std::size_t>> violating;
  double codensity = 0.0;            // max over source points of d(x, j(V))
  bool codensity_ok = true;          // codensity <= 2R
  QIReport qi;                       // constants of j on vertices
  bool ok() const noexcept {
    return upper_violations == 0 && lower_violations == 0 && codensity_ok;
  }
};

// Exhaustive check of d(j v, j v') <= 4R |vv'| and R |vv'| - R <= d(j v, j v')
// over all vertex pairs of a connected Gamma graph.
GammaCheck verify_gamma_qi(const GammaGraph& gamma);

// f_hat(v) = f(j(v)).
std::vector<double> induce_hat_f(const GammaGraph& gamma, std::span<const double> f);

}  // namespace cforest

#endif  // COARSE_FOREST_GAMMA_HPP
