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

// Seeded Monte Carlo runners. Trial t always draws from
// DeriveSeed(point_seed, stage, t), trials fan out over a thread pool and the
// per-trial results are reduced in trial order, so the output does not
// depend on the thread count.

#ifndef W2S_HARNESS_MONTE_CARLO_HPP_
#define W2S_HARNESS_MONTE_CARLO_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "w2s/estimators.hpp"
#include "w2s/spectrum.hpp"

namespace w2s::harness {

struct McSummary {
  double mean = 0.0;
  double se = 0.0;  // NaN when trials < 2
  int trials = 0;
};

McSummary Summarize(const std::vector<double>& samples);

// Runs body(t) for t in [0, trials) on up to `threads` workers. The first
// exception (by trial index) is rethrown after all workers stop.
void ParallelTrials(int trials, int threads, const std::function<void(int)>& body);

// risks(t, k): excess risk in trial t for surrogate k.
struct OneStageMcResult {
  Eigen::MatrixXd risks;
  std::vector<McSummary> per_kind;
};

// Target stage with fixed surrogates. Within a trial every surrogate sees the
// same design and the same label noise (common random numbers), so gaps
// between kinds can be judged with paired standard errors.
OneStageMcResult OneStageMonteCarlo(const Spectrum& spectrum, const Eigen::VectorXd& beta_star,
                                    const std::vector<Eigen::VectorXd>& surrogates, int n,
                                    double sigma_sq, int trials, std::uint64_t point_seed,
                                    int threads, bool noiseless = false);

// Full surrogate -> target pipeline.
McSummary TwoStageMonteCarlo(const ProblemInstance& inst, int trials, std::uint64_t point_seed,
                             int threads, const TwoStageOptions& options = {});

// Train on N(0, Sigma_s) with labels x^T beta_star + z, measure excess risk
// under Sigma_t.
McSummary CovarianceShiftMonteCarlo(const Spectrum& spectrum_s, const Spectrum& spectrum_t,
                                    const Eigen::VectorXd& beta_star, double sigma_sq, int n,
                                    int trials, std::uint64_t point_seed, int threads);

// Model shift: train on N(0, Sigma_t) with labels x^T beta_s + z, measure
// excess risk under Sigma_t against beta_star.
McSummary ModelShiftMonteCarlo(const Spectrum& spectrum_t, const Eigen::VectorXd& beta_s,
                               const Eigen::VectorXd& beta_star, double sigma_sq, int n,
                               int trials, std::uint64_t point_seed, int threads);

// Standard error of the mean of a - b over paired samples.
double PairedStandardError(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace w2s::harness

#endif  // W2S_HARNESS_MONTE_CARLO_HPP_
