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

#ifndef COARSE_FOREST_SCALE_HPP
#define COARSE_FOREST_SCALE_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace cforest {

// Relative slack applied to every threshold comparison so that a distance
// sitting exactly on a scale boundary is classified the same way no matter
// which rounding path produced it.
inline constexpr double kThresholdSlack = 1e-12;

// d <= t, boundary inclusive.
inline bool within(double d, double t) noexcept {
  return d <= t * (1.0 + kThresholdSlack);
}

// d >= t, boundary inclusive.
inline bool at_least(double d, double t) noexcept {
  return d >= t * (1.0 - kThresholdSlack);
}

// A positive scale parameter held as an exact fraction num/den. Integer
// powers are formed exactly when they fit in 128 bits and then rounded once,
// so (1/6)^2 lands on the same double as a literal 1/36.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  // Accepts "p/q", an integer, or a finite decimal such as "0.1666".
  static Ratio parse(std::string_view text);
  static Ratio from_double(double value);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept;
  double pow(int k) const;
  std::string str() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

}  // namespace cforest

#endif  // COARSE_FOREST_SCALE_HPP
