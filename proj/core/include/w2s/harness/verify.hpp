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

// Desk-scale property suite bundling the invariants of every module.

#ifndef W2S_HARNESS_VERIFY_HPP_
#define W2S_HARNESS_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "w2s/harness/config.hpp"

namespace w2s::harness {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // worst value seen
  double tolerance = 0.0;  // pass iff observed <= tolerance
  double margin = 0.0;     // tolerance - observed
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20241019;
  int threads = 1;
  // Multiplies every solved tau by (1 + 1e-3) before the fixed-point checks.
  bool inject_tau_fault = false;
};

std::vector<PropertyResult> RunVerify(const VerifyOptions& options);

std::string VerifyReportJson(const std::vector<PropertyResult>& results,
                             const ExperimentConfig& cfg);

}  // namespace w2s::harness

#endif  // W2S_HARNESS_VERIFY_HPP_
