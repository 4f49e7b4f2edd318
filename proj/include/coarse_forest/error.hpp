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

#ifndef COARSE_FOREST_ERROR_HPP
#define COARSE_FOREST_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cforest {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  NotSquare,
  NonFinite,
  Asymmetric,
  NonzeroDiagonal,
  NegativeEntry,
  TriangleViolation,
  DuplicatePoint,
  DegenerateTriple,
  Disconnected,
  NotATree,
  RangeExhausted,
  BudgetExceeded,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception. `witness` holds
// the point/vertex indices that exhibit the failure, when there are any.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::vector<std::size_t> witness = {})
      : std::runtime_error(what), code_(code), witness_(std::move(witness)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> witness_;
};

}  // namespace cforest

#endif  // COARSE_FOREST_ERROR_HPP
