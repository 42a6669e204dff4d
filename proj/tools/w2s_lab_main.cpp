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

// w2s-lab <experiment> [--config PATH] [flags]
//
// Exit status: 0 ok, 1 configuration or I/O error, 2 verification failure,
// 3 numerical failure.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "w2s/error.hpp"
#include "w2s/harness/config.hpp"
#include "w2s/harness/experiments.hpp"
#include "w2s/harness/table.hpp"
#include "w2s/harness/verify.hpp"

namespace {

using namespace w2s::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitNumerical = 3;

int Emit(const ExperimentConfig& cfg, const ExperimentResult& r) {
  if (cfg.out.empty()) {
    WriteCsv(r.table, std::cout);
  } else {
    WriteOutputs(r.table, cfg.out, cfg.force, cfg.json);
    std::cout << "wrote " << cfg.out << (cfg.json ? " (+ .json)" : "") << "\n";
  }
  for (const auto& line : r.summary) std::cerr << line << "\n";
  return kExitOk;
}

int RunVerifyCommand(const ExperimentConfig& cfg) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.threads = cfg.EffectiveThreads();
  opt.inject_tau_fault = cfg.inject_fault == "tau";
  const auto results = RunVerify(opt);
  int failed = 0;
  for (const auto& r : results) {
    failed += !r.passed;
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  observed=" << FormatDouble(r.observed)
              << " tol=" << FormatDouble(r.tolerance) << "\n";
  }
  const std::string json = VerifyReportJson(results, cfg);
  if (cfg.out.empty()) {
    std::cout << json;
  } else {
    WriteTextFile(cfg.out, json, cfg.force);
  }
  std::cerr << results.size() - failed << "/" << results.size() << " properties passed\n";
  return failed ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-to-target ridgeless regression lab"};
  app.require_subcommand(1, 1);

  // Flag values are kept as raw strings so they can be echoed verbatim and
  // parsed by the same code as the config file.
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static constexpr Flag kFlags[] = {
      {"--p", "p", "dimension"},
      {"--n", "n", "target sample sizes: INT or LIST (a,b,c or start:stop:step)"},
      {"--m", "m", "surrogate sample sizes, paired with --n (two-stage-grid)"},
      {"--alpha", "alpha", "eigenvalue decay exponent(s)"},
      {"--beta-exp", "beta-exp", "signal decay exponent"},
      {"--sigma-t", "sigma-t", "target label-noise variance"},
      {"--sigma-s", "sigma-s", "surrogate label-noise variance"},
      {"--trials", "trials", "Monte Carlo trials"},
      {"--seed", "seed", "parent seed"},
      {"--out", "out", "output path (default: stdout)"},
      {"--kinds", "kinds", "surrogate kinds: ground-truth,optimal,masked"},
      {"--threads", "threads", "worker threads (0 = all cores)"},
      {"--inject-fault", "inject-fault", "verify only: 'tau' perturbs the fixed point"},
  };

  std::string config_path;
  bool force = false, json = false, noiseless = false;
  std::vector<std::pair<const Flag*, std::string>> values(std::size(kFlags));
  std::vector<CLI::App*> subs;
  for (const char* name : {"gain-profile", "risk-vs-n", "two-stage-grid", "mask-count",
                           "scaling-slope", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run ") + name);
    sub->add_option("--config", config_path, "flat key = value config file");
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      values[i].first = &kFlags[i];
      sub->add_option(kFlags[i].name, values[i].second, kFlags[i].help);
    }
    sub->add_flag("--force", force, "overwrite existing outputs");
    sub->add_flag("--json", json, "also write a JSON mirror next to the CSV");
    sub->add_flag("--noiseless", noiseless, "drop fresh noise on surrogate-generated labels");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = nullptr;
  for (CLI::App* s : subs) {
    if (s->parsed()) chosen = s;
  }

  try {
    const Experiment exp = ParseExperiment(chosen->get_name());
    ExperimentConfig cfg = DefaultConfig(exp);
    if (!config_path.empty()) ApplyConfigFile(cfg, config_path);
    // Flags win over the file.
    for (const auto& [flag, raw] : values) {
      if (chosen->count(flag->name) > 0) ApplySetting(cfg, flag->key, raw, "flag");
    }
    if (force) cfg.force = true;
    if (json) cfg.json = true;
    if (noiseless) ApplySetting(cfg, "noiseless", "true", "flag");
    Validate(cfg);

    switch (exp) {
      case Experiment::kGainProfile:
        return Emit(cfg, RunGainProfile(cfg));
      case Experiment::kRiskVsN:
        return Emit(cfg, RunRiskVsN(cfg));
      case Experiment::kTwoStageGrid:
        return Emit(cfg, RunTwoStageGrid(cfg));
      case Experiment::kMaskCount:
        return Emit(cfg, RunMaskCount(cfg));
      case Experiment::kScalingSlope:
        return Emit(cfg, RunScalingSlope(cfg));
      case Experiment::kVerify:
        return RunVerifyCommand(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const w2s::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case w2s::ErrorCode::kNonConvergence:
      case w2s::ErrorCode::kInternalInconsistency:
        return kExitNumerical;
      default:
        return kExitConfig;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
