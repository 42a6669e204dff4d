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

// Literal matrix forms of the risk oracles, built from dense resolvents
// (Sigma + tau I)^{-1} in an arbitrary basis. O(p^3) per call and only meant
// for cross-checking the diagonal code at p <= ~100.

#ifndef W2S_DENSE_REFERENCE_HPP_
#define W2S_DENSE_REFERENCE_HPP_

#include <cstdint>

#include <Eigen/Core>

#include "w2s/theory.hpp"

namespace w2s::dense {

// Haar-ish orthogonal matrix from the QR of a Gaussian matrix.
Eigen::MatrixXd RandomOrthogonal(int p, std::uint64_t seed);

// U diag(lambda) U^T
Eigen::MatrixXd Compose(const Eigen::MatrixXd& u, const Eigen::VectorXd& lambda);

// Root of tr((Sigma + tau I)^{-1} Sigma) = n by plain bisection on log tau,
// each step a Cholesky solve.
double SolveTau(const Eigen::MatrixXd& sigma, int n);

// Solves the implicit definition gamma^2 = kappa (sigma^2 + R(beta_s, beta_s))
// for gamma^2; the equation is affine in gamma^2.
double GammaTSq(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& beta_s, int n,
                double sigma_sq);

// Four-term quadratic-form risk with gamma from GammaTSq.
RiskReport OneStageRisk(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& beta_star,
                        const Eigen::VectorXd& beta_s, int n, double sigma_sq);

// Two-stage risk with every trace written as a matrix product; the expected
// gamma_t^2 follows the closed form obtained by averaging gamma_t^2 over the
// surrogate's Gaussian characterization.
TwoStageTerms TwoStageRiskTerms(const Eigen::MatrixXd& sigma_t, const Eigen::MatrixXd& sigma_s,
                                const Eigen::VectorXd& beta_star, double sigma_t_sq,
                                double sigma_s_sq, int n, int m);

}  // namespace w2s::dense

#endif  // W2S_DENSE_REFERENCE_HPP_
