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

// Closed-form risk oracles in spectral (diagonal) coordinates.

#ifndef W2S_THEORY_HPP_
#define W2S_THEORY_HPP_

#include <limits>

#include <Eigen/Core>

#include "w2s/estimators.hpp"
#include "w2s/spectrum.hpp"

namespace w2s {

enum class RiskSource { kTheory, kMonteCarlo };

struct RiskReport {
  double bias = 0.0;
  double variance = 0.0;
  double total = 0.0;
  RiskSource source = RiskSource::kTheory;
  // Monte Carlo only. standard_error is NaN with fewer than two trials.
  int trials = 0;
  double standard_error = std::numeric_limits<double>::quiet_NaN();
};

struct SpectralCoordinates {
  Spectrum spectrum;
  Eigen::VectorXd beta_bar;  // U^T beta
  Eigen::MatrixXd basis;     // U, columns ordered like spectrum
};

// Eigendecomposition Sigma = U diag(lambda) U^T with lambda sorted
// non-increasing. Eigenvector signs are fixed so the largest-magnitude entry
// of each column is positive. Throws kNotPositiveDefinite for asymmetric or
// non-PD input.
SpectralCoordinates ToSpectralCoordinates(const Eigen::MatrixXd& covariance,
                                          const Eigen::VectorXd& beta);

// kappa (sigma^2 + sum lambda zeta^2 beta_s^2) / (1 - Omega), kappa = p/n.
double GammaTSq(const SpectralStats& stats, const Spectrum& spectrum,
                const Eigen::VectorXd& beta_s, double sigma_sq);

// Risk of the target model trained on labels x^T beta_s + z, measured
// against beta_star.
RiskReport OneStageRisk(const Spectrum& spectrum, const Eigen::VectorXd& beta_star,
                        const Eigen::VectorXd& beta_s, int n, double sigma_sq);
// Same, reusing a solved fixed point.
RiskReport OneStageRisk(const SpectralStats& stats, const Spectrum& spectrum,
                        const Eigen::VectorXd& beta_star, const Eigen::VectorXd& beta_s,
                        double sigma_sq);

// (sigma^2 Omega + B) / (1 - Omega), B = sum lambda zeta^2 beta_bar^2.
RiskReport OmniscientRisk(const Spectrum& spectrum, const Eigen::VectorXd& beta_bar,
                          double sigma_sq, int n);
RiskReport OmniscientRisk(const SpectralStats& stats, const Spectrum& spectrum,
                          const Eigen::VectorXd& beta_bar, double sigma_sq);

struct TwoStageTerms {
  double gamma_s_sq = 0.0;
  double expected_gamma_t_sq = 0.0;
  double term1 = 0.0;  // bias
  double term2 = 0.0;  // target-stage variance
  double term3 = 0.0;  // surrogate noise carried through the target fit
};

// Surrogate fitted on m samples, target on n, both overparametrized.
// Throws kHypothesisViolated unless m < p and n < p.
TwoStageTerms TwoStageRiskTerms(const ProblemInstance& inst);
RiskReport TwoStageRisk(const ProblemInstance& inst);

// beta_s_i = sqrt(lambda_s_i / lambda_t_i) beta_star_i.
Eigen::VectorXd CovarianceShiftMap(const Eigen::VectorXd& beta_star, const Spectrum& spectrum_s,
                                   const Spectrum& spectrum_t);

}  // namespace w2s

#endif  // W2S_THEORY_HPP_
