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

#ifndef W2S_HARNESS_EXPERIMENTS_HPP_
#define W2S_HARNESS_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include "w2s/harness/config.hpp"
#include "w2s/harness/table.hpp"

namespace w2s::harness {

struct ExperimentResult {
  Table table;
  std::vector<std::string> summary;  // human-readable lines for stdout
};

// Build identifier baked in at configure time.
const char* BuildId();

// Schema, experiment name, build id and the verbatim config echo.
void AddStandardMetadata(const ExperimentConfig& cfg, Table& table);

ExperimentResult RunGainProfile(const ExperimentConfig& cfg);
ExperimentResult RunRiskVsN(const ExperimentConfig& cfg);
ExperimentResult RunTwoStageGrid(const ExperimentConfig& cfg);
ExperimentResult RunMaskCount(const ExperimentConfig& cfg);
ExperimentResult RunScalingSlope(const ExperimentConfig& cfg);

struct ScalingSlopes {
  double predicted = 0.0;  // -ScalingExponent
  double target = 0.0;     // NaN when the series was not requested
  double optimal = 0.0;
};

// Theory-only log-log slopes of the omniscient and optimal-surrogate risks.
ScalingSlopes ComputeScalingSlopes(double alpha, double beta_exp, int p,
                                   const std::vector<int>& n_grid, double sigma_sq,
                                   bool want_target = true, bool want_optimal = true);

// Ordinary least-squares slope of y on x.
double LeastSquaresSlope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace w2s::harness

#endif  // W2S_HARNESS_EXPERIMENTS_HPP_
