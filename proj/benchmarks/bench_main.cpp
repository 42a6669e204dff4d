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

#include <benchmark/benchmark.h>

#include "w2s/estimators.hpp"
#include "w2s/spectrum.hpp"
#include "w2s/surrogate_design.hpp"
#include "w2s/theory.hpp"

namespace {

using namespace w2s;

void BM_SolveTau(benchmark::State& state) {
  const Spectrum spec = PowerLawSpectrum(static_cast<int>(state.range(0)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(SolveTau(spec, 200).tau);
}
BENCHMARK(BM_SolveTau)->Arg(1000)->Arg(100000)->Arg(1000000);

void BM_FitMinNorm(benchmark::State& state) {
  const Spectrum spec = PowerLawSpectrum(500, 2.0);
  const Eigen::VectorXd beta = PowerLawSignal(500, 2.0, 1.5);
  const Dataset d = SampleDataset(spec, beta, 0.05, 200, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fit(d.design, d.labels).beta_hat.data());
}
BENCHMARK(BM_FitMinNorm)->Unit(benchmark::kMillisecond);

void BM_BruteForceMask(benchmark::State& state) {
  const Spectrum spec = PowerLawSpectrum(14, 2.0);
  const Eigen::VectorXd beta = PowerLawSignal(14, 2.0, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceMask(spec, beta, 6, 0.0).size());
}
BENCHMARK(BM_BruteForceMask)->Unit(benchmark::kMillisecond);

void BM_TwoStageRisk(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const Spectrum spec = PowerLawSpectrum(p, 2.0);
  const ProblemInstance inst{spec, spec, PowerLawSignal(p, 2.0, 1.5), 0.05, 0.05, p / 4, p / 2};
  for (auto _ : state) benchmark::DoNotOptimize(TwoStageRisk(inst).total);
}
BENCHMARK(BM_TwoStageRisk)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
