// Copyright 2026 The w2s-lab Authors
//
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

#ifndef W2S_ERROR_HPP_
#define W2S_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace w2s {

enum class ErrorCode {
  kInvalidParameter,
  kDimensionMismatch,
  kNoSolution,
  kNonConvergence,
  kHypothesisViolated,
  kInternalInconsistency,
  kOutOfRange,
  kTooLarge,
  kNotPositiveDefinite,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kDimensionMismatch:
      return "dimension-mismatch";
    case ErrorCode::kNoSolution:
      return "no-solution";
    case ErrorCode::kNonConvergence:
      return "non-convergence";
    case ErrorCode::kHypothesisViolated:
      return "hypothesis-violated";
    case ErrorCode::kInternalInconsistency:
      return "internal-inconsistency";
    case ErrorCode::kOutOfRange:
      return "out-of-range";
    case ErrorCode::kTooLarge:
      return "too-large";
    case ErrorCode::kNotPositiveDefinite:
      return "not-positive-definite";
  }
  return "unknown";
}

}  // namespace w2s

#endif  // W2S_ERROR_HPP_
