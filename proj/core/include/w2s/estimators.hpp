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

// Gaussian simulation in spectral coordinates, the ridgeless estimator and
// the surrogate -> target pipeline.

#ifndef W2S_ESTIMATORS_HPP_
#define W2S_ESTIMATORS_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "w2s/spectrum.hpp"

namespace w2s {

struct ProblemInstance {
  Spectrum spectrum_t;
  Spectrum spectrum_s;
  Eigen::VectorXd beta_star;
  double sigma_t_sq = 0.0;
  double sigma_s_sq = 0.0;
  int n = 1;  // target samples
  int m = 1;  // surrogate samples

  int p() const { return static_cast<int>(spectrum_t.size()); }
  // Throws kDimensionMismatch / kInvalidParameter.
  void Validate() const;
};

struct Dataset {
  Eigen::MatrixXd design;  // rows are samples
  Eigen::VectorXd labels;
  std::uint64_t seed = 0;
};

enum class Regime { kMinNormInterpolator, kOrdinaryLeastSquares };

struct EstimatorOutput {
  Eigen::VectorXd beta_hat;
  Regime regime = Regime::kMinNormInterpolator;
  Eigen::Index rank = 0;
  // Singular values under the cutoff were dropped. Reported, not fatal.
  bool rank_deficient = false;
};

// Draws count rows with x_j ~ N(0, lambda_j), then labels x^T beta + z with
// z ~ N(0, sigma_sq). Design first (row by row), noise second, from one
// mt19937_64 stream seeded with `seed`.
Dataset SampleDataset(const Spectrum& spectrum, const Eigen::VectorXd& beta, double sigma_sq,
                      int count, std::uint64_t seed);

// Pseudo-inverse of a design, factorized once so that several label vectors
// can be solved against the same X. Cutoff is sigma_max * max(n,p) * eps.
class PseudoInverseSolver {
 public:
  explicit PseudoInverseSolver(const Eigen::MatrixXd& design);
  ~PseudoInverseSolver();
  PseudoInverseSolver(PseudoInverseSolver&&) noexcept;
  PseudoInverseSolver& operator=(PseudoInverseSolver&&) noexcept;

  EstimatorOutput Solve(const Eigen::VectorXd& labels) const;
  Eigen::Index rank() const;
  // Orthonormal basis of the numerical null space, p x (p - rank). Only
  // available when the factorization was full (p <= 64); used by tests.
  Eigen::MatrixXd NullSpaceBasis() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Min-norm interpolator when rows < cols, least squares otherwise.
EstimatorOutput Fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels);

struct TwoStageOptions {
  // Drop the fresh N(0, sigma_t^2) noise on surrogate-generated labels.
  bool noiseless_distillation = false;
};

struct TwoStageOutput {
  Eigen::VectorXd beta_s;
  Eigen::VectorXd beta_s2t;
};

// Target stage only: fit on n fresh target inputs labelled by a fixed beta_s.
EstimatorOutput TargetStageFit(const Spectrum& spectrum_t, const Eigen::VectorXd& beta_s,
                               double sigma_t_sq, int n, std::uint64_t seed,
                               const TwoStageOptions& options = {});

// Surrogate stage on m samples from (spectrum_s, beta_star, sigma_s), then
// the target stage on labels produced by the fitted surrogate. Stage seeds
// are DeriveSeed(seed, 1, 0) and DeriveSeed(seed, 2, 0).
TwoStageOutput TwoStageFit(const ProblemInstance& inst, std::uint64_t seed,
                           const TwoStageOptions& options = {});

// sum_j lambda_j (beta_hat_j - beta_star_j)^2
double EmpiricalExcessRisk(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star,
                           const Spectrum& spectrum);

// Zeroes entries outside support (0-based indices). Throws kOutOfRange.
Eigen::VectorXd ApplyMask(const Eigen::VectorXd& beta, const std::vector<int>& support);

}  // namespace w2s

#endif  // W2S_ESTIMATORS_HPP_
