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

#include "w2s/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>
#include <type_traits>

namespace w2s::harness {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string NormalizeKey(std::string_view key) {
  std::string k = Trim(key);
  std::replace(k.begin(), k.end(), '_', '-');
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
  return k;
}

template <typename T>
T ParseNumber(std::string_view text, std::string_view key) {
  const std::string t = Trim(text);
  T value{};
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError("config field '" + std::string(key) + "': cannot parse '" + t + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError("config field '" + std::string(key) + "': value must be finite");
    }
  }
  return value;
}

bool ParseBool(std::string_view text, std::string_view key) {
  const std::string t = Trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("config field '" + std::string(key) + "': expected a boolean, got '" + t + "'");
}

std::vector<std::string> SplitCommas(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    const auto piece = Trim(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
std::vector<T> ParseList(std::string_view text, std::string_view key) {
  std::vector<T> out;
  for (const std::string& piece : SplitCommas(text)) {
    const auto c1 = piece.find(':');
    if (c1 == std::string::npos) {
      out.push_back(ParseNumber<T>(piece, key));
      continue;
    }
    const auto c2 = piece.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw ConfigError("config field '" + std::string(key) + "': range needs start:stop:step");
    }
    const T a = ParseNumber<T>(std::string_view(piece).substr(0, c1), key);
    const T b = ParseNumber<T>(std::string_view(piece).substr(c1 + 1, c2 - c1 - 1), key);
    const T step = ParseNumber<T>(std::string_view(piece).substr(c2 + 1), key);
    if (!(step > 0) || b < a) {
      throw ConfigError("config field '" + std::string(key) + "': bad range '" + piece + "'");
    }
    // Index-based so that double ranges do not drift.
    const auto count = static_cast<long>(std::floor((b - a) / static_cast<double>(step) + 1e-9));
    if (count > 1000000) throw ConfigError("config field '" + std::string(key) + "': range too long");
    for (long i = 0; i <= count; ++i) out.push_back(static_cast<T>(a + i * step));
  }
  if (out.empty()) throw ConfigError("config field '" + std::string(key) + "': empty list");
  return out;
}

}  // namespace

Experiment ParseExperiment(std::string_view name) {
  static constexpr std::pair<std::string_view, Experiment> kNames[] = {
      {"gain-profile", Experiment::kGainProfile},   {"risk-vs-n", Experiment::kRiskVsN},
      {"two-stage-grid", Experiment::kTwoStageGrid}, {"mask-count", Experiment::kMaskCount},
      {"scaling-slope", Experiment::kScalingSlope}, {"verify", Experiment::kVerify},
  };
  for (const auto& [n, e] : kNames) {
    if (n == name) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::string_view ExperimentName(Experiment e) {
  switch (e) {
    case Experiment::kGainProfile:
      return "gain-profile";
    case Experiment::kRiskVsN:
      return "risk-vs-n";
    case Experiment::kTwoStageGrid:
      return "two-stage-grid";
    case Experiment::kMaskCount:
      return "mask-count";
    case Experiment::kScalingSlope:
      return "scaling-slope";
    case Experiment::kVerify:
      return "verify";
  }
  return "unknown";
}

int ExperimentConfig::EffectiveThreads() const {
  if (threads > 0) return threads;
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

ExperimentConfig DefaultConfig(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.alpha_grid = {2.0};
  switch (e) {
    case Experiment::kGainProfile:
      c.p = 500;
      c.n_grid = {200};
      break;
    case Experiment::kRiskVsN:
      c.p = 500;
      c.n_grid = {100, 200, 300};
      c.kinds = {"ground-truth", "optimal", "masked"};
      break;
    case Experiment::kTwoStageGrid:
      c.p = 100;
      c.n_grid = ParseIntList("10:90:10");
      c.trials = 400;
      break;
    case Experiment::kMaskCount:
      c.p = 500;
      c.n_grid = ParseIntList("10:100:10");
      c.alpha_grid = {1.5, 3.0, 4.5};
      break;
    case Experiment::kScalingSlope:
      c.p = 8000;
      c.n_grid = {50, 100, 200, 400, 800};
      c.sigma_t_sq = 0.0;
      c.kinds = {"ground-truth", "optimal"};
      break;
    case Experiment::kVerify:
      break;
  }
  return c;
}

std::vector<int> ParseIntList(std::string_view text) { return ParseList<int>(text, "list"); }
std::vector<double> ParseDoubleList(std::string_view text) {
  return ParseList<double>(text, "list");
}

void ApplySetting(ExperimentConfig& cfg, std::string_view raw_key, std::string_view value,
                  std::string_view origin) {
  const std::string key = NormalizeKey(raw_key);
  if (key == "experiment") {
    if (ParseExperiment(Trim(value)) != cfg.experiment) {
      throw ConfigError("config field 'experiment': file is for '" + Trim(value) +
                        "' but running '" + std::string(ExperimentName(cfg.experiment)) + "'");
    }
  } else if (key == "p") {
    cfg.p = ParseNumber<int>(value, key);
  } else if (key == "n") {
    cfg.n_grid = ParseList<int>(value, key);
  } else if (key == "m") {
    cfg.m_grid = ParseList<int>(value, key);
  } else if (key == "alpha") {
    cfg.alpha_grid = ParseList<double>(value, key);
  } else if (key == "beta-exp") {
    cfg.beta_exp = ParseNumber<double>(value, key);
  } else if (key == "sigma-t" || key == "sigma-t-sq") {
    cfg.sigma_t_sq = ParseNumber<double>(value, key);
  } else if (key == "sigma-s" || key == "sigma-s-sq") {
    cfg.sigma_s_sq = ParseNumber<double>(value, key);
  } else if (key == "trials") {
    cfg.trials = ParseNumber<int>(value, key);
  } else if (key == "seed") {
    cfg.seed = ParseNumber<std::uint64_t>(value, key);
  } else if (key == "out") {
    cfg.out = Trim(value);
  } else if (key == "kinds") {
    cfg.kinds = SplitCommas(value);
  } else if (key == "force") {
    cfg.force = ParseBool(value, key);
  } else if (key == "json") {
    cfg.json = ParseBool(value, key);
  } else if (key == "threads") {
    cfg.threads = ParseNumber<int>(value, key);
  } else if (key == "noiseless") {
    cfg.noiseless_distillation = ParseBool(value, key);
  } else if (key == "inject-fault") {
    cfg.inject_fault = Trim(value);
  } else {
    throw ConfigError("unknown config field '" + std::string(raw_key) + "'");
  }
  cfg.echo.push_back({key, std::string(value), std::string(origin)});
}

void ApplyConfigFile(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = Trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string value = Trim(std::string_view(body).substr(eq + 1));
    ApplySetting(cfg, std::string_view(body).substr(0, eq), value,
                 path + ":" + std::to_string(lineno));
  }
}

void Validate(const ExperimentConfig& cfg) {
  if (cfg.experiment == Experiment::kVerify) {
    if (!cfg.inject_fault.empty() && cfg.inject_fault != "tau") {
      throw ConfigError("config field 'inject-fault': only 'tau' is supported");
    }
    return;
  }
  if (!cfg.inject_fault.empty()) {
    throw ConfigError("config field 'inject-fault': only valid for verify");
  }
  if (cfg.p < 1) throw ConfigError("config field 'p': must be >= 1");
  if (cfg.n_grid.empty()) throw ConfigError("config field 'n': grid is empty");
  if (cfg.alpha_grid.empty()) throw ConfigError("config field 'alpha': grid is empty");
  if (cfg.trials < 1) throw ConfigError("config field 'trials': must be >= 1");
  if (cfg.threads < 0) throw ConfigError("config field 'threads': must be >= 0");
  if (cfg.sigma_t_sq < 0) throw ConfigError("config field 'sigma-t': variance must be >= 0");
  if (cfg.sigma_s_sq < 0) throw ConfigError("config field 'sigma-s': variance must be >= 0");
  for (double a : cfg.alpha_grid) {
    if (!(a > 1.0)) throw ConfigError("config field 'alpha': every alpha must be > 1");
  }
  if (!(cfg.beta_exp > 1.0)) throw ConfigError("config field 'beta-exp': must be > 1");
  for (int n : cfg.n_grid) {
    if (n < 1) throw ConfigError("config field 'n': entries must be >= 1");
    // two-stage-grid drops n >= p rows with a warning instead.
    if (n >= cfg.p && cfg.experiment != Experiment::kTwoStageGrid) {
      throw ConfigError("config field 'n': every n must be < p (" + std::to_string(n) +
                        " >= " + std::to_string(cfg.p) + ")");
    }
  }
  if (cfg.experiment == Experiment::kTwoStageGrid && !cfg.m_grid.empty() &&
      cfg.m_grid.size() != cfg.n_grid.size()) {
    throw ConfigError("config field 'm': must have the same length as 'n'");
  }
  if (cfg.experiment == Experiment::kRiskVsN) {
    if (cfg.kinds.empty()) throw ConfigError("config field 'kinds': empty");
    for (const auto& k : cfg.kinds) {
      if (k != "ground-truth" && k != "optimal" && k != "masked") {
        throw ConfigError("config field 'kinds': unknown kind '" + k + "'");
      }
    }
  }
  if (cfg.experiment == Experiment::kScalingSlope) {
    if (cfg.kinds.empty()) throw ConfigError("config field 'kinds': empty");
    for (const auto& k : cfg.kinds) {
      if (k != "ground-truth" && k != "optimal") {
        throw ConfigError("config field 'kinds': scaling-slope accepts ground-truth, optimal");
      }
    }
    if (cfg.n_grid.size() < 3) throw ConfigError("config field 'n': need at least 3 points");
    const int nmax = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
    if (cfg.p < 10 * nmax) throw ConfigError("config field 'p': must be >= 10 * max(n)");
  }
}

}  // namespace w2s::harness
