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
#ifndef COARSE_FOREST_METRIC_HPP
#define COARSE_FOREST_METRIC_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cforest {

inline constexpr double kDefaultTriangleSlack = 1e-9;

// A validated finite metric space. Distances are stored row-major; once
// constructed the object is immutable.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  // Validates and takes ownership. Throws Error naming the first violated
  // axiom (NotSquare, NonFinite, NonzeroDiagonal, NegativeEntry, Asymmetric,
  // DuplicatePoint, TriangleViolation) with witness indices.
  static FiniteMetricSpace validate(std::vector<double> dist, std::size_t n,
                                    std::vector<std::string> ids = {},
                                    double triangle_slack = kDefaultTriangleSlack);
  static FiniteMetricSpace validate(const std::vector<std::vector<double>>& rows,
                                    std::vector<std::string> ids = {},
                                    double triangle_slack = kDefaultTriangleSlack);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return dist_[i * n_ + j];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {dist_.data() + i * n_, n_};
  }
  const std::vector<double>& data() const noexcept { return dist_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  double diameter() const noexcept;
  // Smallest off-diagonal distance; 0 for a single point.
  double min_positive_distance() const noexcept;

  // Subspace on the given indices, in the given order.
  FiniteMetricSpace subspace(std::span<const std::size_t> index) const;
  // Same space with points reordered: new point i is old point perm[i].
  FiniteMetricSpace permuted(std::span<const std::size_t> perm) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<std::string> ids_;
};

enum class PointMetric { Euclidean, Chebyshev };

// Builds the distance matrix of a point cloud, then validates it.
FiniteMetricSpace from_points(const std::vector<std::vector<double>>& points,
                              PointMetric metric,
                              std::vector<std::string> ids = {});

struct UltrametricCheck {
  bool ultrametric = true;
  // (i, j, k) with d(i,j) > max(d(i,k), d(k,j)).
  std::optional<std::array<std::size_t, 3>> witness;
};

UltrametricCheck is_ultrametric(const FiniteMetricSpace& z);

// A FiniteMetricSpace known to satisfy the strong triangle inequality.
class UltrametricSpace {
 public:
  // Throws InvalidArgument if z is not ultrametric.
  explicit UltrametricSpace(FiniteMetricSpace z);
  const FiniteMetricSpace& base() const noexcept { return base_; }

 private:
  FiniteMetricSpace base_;
};

// Partition into eps-connected components. A chain step is allowed when
// d <= eps. Blocks are sorted, and ordered by their smallest member.
using Partition = std::vector<std::vector<std::size_t>>;
Partition epsilon_components(const FiniteMetricSpace& z, double eps);

struct ChainCertificate {
  double scale = 0.0;
  std::pair<std::size_t, std::size_t> endpoints{0, 0};
  std::vector<std::size_t> chain;
  std::size_t hops = 0;
};

struct FiniteConnectivity {
  bool holds = true;
  double scale = 0.0;
  std::size_t bound = 0;
  Partition components;
  // Max over pairs of the shortest chain hop count, one entry per component.
  std::vector<std::size_t> max_hops;
  ChainCertificate worst;
};

// Checks D-finite eps-connectivity of every eps-component.
FiniteConnectivity d_finitely_connected(const FiniteMetricSpace& z, double eps,
                                        std::size_t bound);

// Greedy maximal R-separated set, scanning points in ascending index order.
std::vector<std::size_t> greedy_maximal_separated(const FiniteMetricSpace& z,
                                                  double separation);

// Largest ultrametric below d: minimax chain cost, via a minimum spanning tree.
UltrametricSpace subdominant_ultrametric(const FiniteMetricSpace& z);

struct ControlFit {
  double p = 1.0;
  double q = 1.0;
  double max_violation = 0.0;
  // (t, ratio) for every ordered triple (x, a, b) with x != b.
  std::vector<std::pair<double, double>> samples;
  std::size_t grid_steps = 0;
  double p_max = 0.0;
};

inline constexpr double kControlPMax = 8.0;
inline constexpr std::size_t kControlGridSteps = 64;

// Empirical estimate of a power control function eta(t) = q max(t^p, t^(1/p))
// for the map point i of z -> point correspondence[i] of u. For each p on a
// geometric grid over [1, p_max], q is the largest implied ratio (at least 1);
// the reported p minimises q, ties going to the smaller p.
ControlFit quasi_symmetry_control_estimate(const FiniteMetricSpace& z,
                                           const FiniteMetricSpace& u,
                                           std::span<const std::size_t> correspondence,
                                           double p_max = kControlPMax,
                                           std::size_t grid_steps = kControlGridSteps);

}  // namespace cforest

#endif  // COARSE_FOREST_METRIC_HPP
