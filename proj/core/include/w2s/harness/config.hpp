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

#ifndef W2S_HARNESS_CONFIG_HPP_
#define W2S_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace w2s::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { kGainProfile, kRiskVsN, kTwoStageGrid, kMaskCount, kScalingSlope, kVerify };

Experiment ParseExperiment(std::string_view name);  // throws ConfigError
std::string_view ExperimentName(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::kRiskVsN;
  int p = 500;
  std::vector<int> n_grid;
  std::vector<int> m_grid;  // two-stage-grid; empty means m = n
  std::vector<double> alpha_grid;
  double beta_exp = 1.5;
  double sigma_t_sq = 0.05;  // variances, not standard deviations
  double sigma_s_sq = 0.05;
  int trials = 200;
  std::uint64_t seed = 20241019;
  std::string out;  // empty: CSV to stdout
  std::vector<std::string> kinds;
  bool force = false;
  bool json = false;
  int threads = 0;  // 0: hardware concurrency
  bool noiseless_distillation = false;
  std::string inject_fault;  // verify only: "" or "tau"

  // Every accepted setting in application order: key, raw text, origin.
  struct Setting {
    std::string key;
    std::string raw;
    std::string origin;
  };
  std::vector<Setting> echo;

  int EffectiveThreads() const;
};

// Defaults for one experiment, mirroring the figure setups.
ExperimentConfig DefaultConfig(Experiment e);

// Applies key=value. Keys accept '-' or '_' separators. Throws ConfigError
// naming the key on unknown keys or unparsable values.
void ApplySetting(ExperimentConfig& cfg, std::string_view key, std::string_view value,
                  std::string_view origin);

// Flat "key = value" file; '#' starts a comment. An `experiment` key, if
// present, must match cfg.experiment.
void ApplyConfigFile(ExperimentConfig& cfg, const std::string& path);

// Cross-field checks (grids non-empty, n < p for theory, trials >= 1, ...).
void Validate(const ExperimentConfig& cfg);

// "10,20,30" or "start:stop:step" (inclusive) or a mix of both.
std::vector<int> ParseIntList(std::string_view text);
std::vector<double> ParseDoubleList(std::string_view text);

}  // namespace w2s::harness

#endif  // W2S_HARNESS_CONFIG_HPP_
