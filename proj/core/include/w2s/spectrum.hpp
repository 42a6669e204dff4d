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

// Covariance eigenstructure and the effective-regularization fixed point.
//
// Everything here works on eigenvalues only. A covariance is represented by
// its spectrum in the diagonalizing basis, so p can go to 10^7 without ever
// touching a p x p matrix.

#ifndef W2S_SPECTRUM_HPP_
#define W2S_SPECTRUM_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace w2s {

// Eigenvalues of a covariance, positive and sorted non-increasing.
class Spectrum {
 public:
  /// Throws kInvalidParameter if empty, non-positive, non-finite or not
  /// sorted non-increasing. Ties are allowed.
  explicit Spectrum(Eigen::VectorXd eigenvalues);
  explicit Spectrum(const std::vector<double>& eigenvalues);

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& values() const { return values_; }

  /// Spectrum of c * Sigma.
  Spectrum Scaled(double c) const;

 private:
  Eigen::VectorXd values_;
};

// Fixed-point statistics of a spectrum at sample size n.
struct SpectralStats {
  double tau = 0.0;
  Eigen::VectorXd zeta;  // zeta_i = tau / (lambda_i + tau)
  double omega = 0.0;    // (1/n) sum (1 - zeta_i)^2
  int n = 0;

  /// p / n
  double kappa() const { return static_cast<double>(zeta.size()) / n; }
};

struct PowerLawParams {
  double alpha = 2.0;     // lambda_i = i^-alpha
  double beta_exp = 1.5;  // lambda_i * beta_i^2 = i^-beta_exp
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool Contains(double x) const { return lower <= x && x <= upper; }
};

struct FixedPointOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  int max_iterations = 200;
};

// lambda_i = i^-alpha for i = 1..p. Requires p >= 1, alpha > 1.
Spectrum PowerLawSpectrum(int p, double alpha);

// Signal coefficients with lambda_i * beta_i^2 = i^-beta_exp, beta_i >= 0.
Eigen::VectorXd PowerLawSignal(int p, double alpha, double beta_exp);

// sum_i lambda_i / (lambda_i + tau), accumulated smallest term first.
double EffectiveDegreesOfFreedom(const Spectrum& spectrum, double tau);

// Solves sum_i lambda_i / (lambda_i + tau) = n for tau > 0 by bisection on
// log(tau) over the bracket [lambda_p * eps, lambda_1 * p / n]. Requires
// 1 <= n < p; throws kNoSolution otherwise and kNonConvergence if the
// residual tolerance is not met within the iteration cap.
SpectralStats SolveTau(const Spectrum& spectrum, int n,
                       const FixedPointOptions& options = {});

// Builds zeta and omega for a given tau (no root finding). Used by the
// verification suite to evaluate perturbed fixed points.
SpectralStats StatsAtTau(const Spectrum& spectrum, int n, double tau);

// |sum lambda/(lambda+tau) - n| at the stored tau.
double FixedPointResidual(const Spectrum& spectrum, const SpectralStats& stats);

// Omega computed as sum (1-zeta)^2 / sum (1-zeta); equals stats.omega at an
// exact fixed point.
double OmegaRatioForm(const SpectralStats& stats);

// c * n^-alpha with c = (pi / (alpha sin(pi/alpha)))^alpha, the p -> inf
// limit of the fixed point for a power-law spectrum.
double TauAsymptotic(double alpha, int n);

// (alpha - 1) / alpha.
double OmegaAsymptotic(double alpha);

// (3 + 2^-alpha) / (4 + 2^-(alpha-2)); the tau bounds need n < p * k.
double TauBoundHypothesisRatio(double alpha);

// Finite-(n, p) bracket for tau on a power-law spectrum, obtained by
// inverting c n^alpha <= 1/tau <= c (n + 1 + (p+1)/(alpha-1))^alpha with
// c = (alpha sin(pi/alpha) / pi)^alpha. Throws kHypothesisViolated when
// n >= p * TauBoundHypothesisRatio(alpha).
Interval TauBoundsNonAsymptotic(double alpha, int p, int n);

// Lower bound on omega for a power-law spectrum, valid when
// p k1 + alpha^2/(alpha-1)^2 < n < p k2 with k1 = alpha/(alpha-1)^2 and
// k2 = TauBoundHypothesisRatio(alpha); throws kHypothesisViolated otherwise.
double OmegaLowerBound(double alpha, int p, int n);

// True iff (alpha, p, n) satisfies the hypothesis of OmegaLowerBound.
bool OmegaBoundHypothesisHolds(double alpha, int p, int n);

}  // namespace w2s

#endif  // W2S_SPECTRUM_HPP_
