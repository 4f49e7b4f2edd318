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
#include "coarse_forest/scale.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>

#include "coarse_forest/error.hpp"

namespace cforest {
namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::Parse, "not an integer: '" + std::string(s) + "'");
  return v;
}

std::optional<__int128> exact_pow(std::int64_t base, int e) {
  __int128 acc = 1;
  const __int128 limit = static_cast<__int128>(1) << 112;
  for (int i = 0; i < e; ++i) {
    acc *= base;
    if (acc > limit || acc < -limit) return std::nullopt;
  }
  return acc;
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "ratio with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : num;
  den_ = g ? den / g : den;
}

Ratio Ratio::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::Parse, "empty ratio");
  if (const auto slash = text.find('/'); slash != std::string_view::npos)
    return Ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Ratio(parse_int(text), 1);
  const std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 17) throw Error(ErrorCode::Parse, "too many decimals: " + std::string(text));
  std::string digits(text.substr(0, dot));
  digits += frac;
  if (digits.empty() || digits == "-") digits += "0";
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Ratio(parse_int(digits), den);
}

Ratio Ratio::from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite ratio");
  // Continued-fraction approximation, exact for doubles that are short
  // fractions.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = value;
  for (int i = 0; i < 40; ++i) {
    const double a = std::floor(x);
    if (std::abs(a) > 1e12) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > 1'000'000'000) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == value) break;
    const double rem = x - a;
    if (rem == 0.0) break;
    x = 1.0 / rem;
  }
  return Ratio(h1, k1);
}

double Ratio::value() const noexcept {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

double Ratio::pow(int k) const {
  if (num_ <= 0) throw Error(ErrorCode::InvalidArgument, "power of a non-positive ratio");
  const int e = k < 0 ? -k : k;
  const std::int64_t top = k < 0 ? den_ : num_;
  const std::int64_t bottom = k < 0 ? num_ : den_;
  const auto p = exact_pow(top, e);
  const auto q = exact_pow(bottom, e);
  constexpr __int128 kExactDouble = static_cast<__int128>(1) << 53;
  if (p && q && *p <= kExactDouble && *q <= kExactDouble)
    return static_cast<double>(*p) / static_cast<double>(*q);  // rounded once
  if (p && q) return static_cast<double>(static_cast<long double>(*p) / static_cast<long double>(*q));
  return static_cast<double>(std::pow(static_cast<long double>(top) / bottom, e));
}

std::string Ratio::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace cforest
