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

#include "w2s/dense_reference.hpp"

#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "w2s/error.hpp"

namespace w2s::dense {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd Identity(Eigen::Index p) { return MatrixXd::Identity(p, p); }

MatrixXd Resolvent(const MatrixXd& sigma, double tau) {
  return (sigma + tau * Identity(sigma.rows())).llt().solve(Identity(sigma.rows()));
}

MatrixXd SqrtPsd(const MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sigma);
  return eig.operatorSqrt();
}

double TraceDof(const MatrixXd& sigma, double tau) {
  return (sigma + tau * Identity(sigma.rows())).llt().solve(sigma).trace();
}

struct Stage {
  double tau;
  MatrixXd theta;  // (Sigma + tau)^{-1} Sigma
  double trace_sq;  // tr(Sigma^2 (Sigma + tau)^{-2})
};

Stage MakeStage(const MatrixXd& sigma, int n) {
  Stage s;
  s.tau = SolveTau(sigma, n);
  s.theta = Resolvent(sigma, s.tau) * sigma;
  s.trace_sq = (s.theta * s.theta).trace();
  return s;
}

}  // namespace

MatrixXd RandomOrthogonal(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd g(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  // Fix the sign ambiguity against diag(R).
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

MatrixXd Compose(const MatrixXd& u, const VectorXd& lambda) {
  return u * lambda.asDiagonal() * u.transpose();
}

double SolveTau(const MatrixXd& sigma, int n) {
  const Eigen::Index p = sigma.rows();
  if (n < 1 || n >= p) throw Error(ErrorCode::kNoSolution, "dense fixed point needs 1 <= n < p");
  double lo = 1e-300;
  double hi = sigma.trace() / n + 1.0;
  while (TraceDof(sigma, lo) < n) lo *= 1e-3;  // cannot happen for PD input
  while (TraceDof(sigma, hi) > n) hi *= 2.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (TraceDof(sigma, mid) > n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

double GammaTSq(const MatrixXd& sigma, const VectorXd& beta_s, int n, double sigma_sq) {
  const Eigen::Index p = sigma.rows();
  const Stage st = MakeStage(sigma, n);
  const double kappa = static_cast<double>(p) / n;
  // R(beta_s, beta_s) = beta_s^T (I - theta)^T Sigma (I - theta) beta_s + gamma^2 tr/p
  const MatrixXd i_minus = Identity(p) - st.theta;
  const double bias = beta_s.dot(i_minus.transpose() * sigma * i_minus * beta_s);
  const double slope = kappa * st.trace_sq / p;
  return kappa * (sigma_sq + bias) / (1.0 - slope);
}

RiskReport OneStageRisk(const MatrixXd& sigma, const VectorXd& beta_star, const VectorXd& beta_s,
                        int n, double sigma_sq) {
  const Eigen::Index p = sigma.rows();
  const Stage st = MakeStage(sigma, n);
  const MatrixXd& t1 = st.theta;
  const MatrixXd i_minus = Identity(p) - t1;
  const VectorXd d = beta_s - beta_star;
  const double gamma_sq = GammaTSq(sigma, beta_s, n, sigma_sq);
  // E_g[theta2^T Sigma theta2] = tr(Sigma^{1/2} R Sigma R Sigma^{1/2}) / p
  const MatrixXd half = SqrtPsd(sigma);
  const MatrixXd res = Resolvent(sigma, st.tau);
  const double e_theta2 = (half * res * sigma * res * half).trace() / p;

  RiskReport r;
  const double a = d.dot(t1.transpose() * sigma * t1 * d);
  const double c = beta_star.dot(i_minus.transpose() * sigma * i_minus * beta_star);
  const double cross = -2.0 * beta_star.dot(i_minus.transpose() * sigma * t1 * d);
  r.bias = a + c + cross;
  r.variance = gamma_sq * e_theta2;
  r.total = r.bias + r.variance;
  return r;
}

TwoStageTerms TwoStageRiskTerms(const MatrixXd& sigma_t, const MatrixXd& sigma_s,
                                const VectorXd& beta_star, double sigma_t_sq, double sigma_s_sq,
                                int n, int m) {
  const Eigen::Index p = sigma_t.rows();
  const Stage t = MakeStage(sigma_t, n);
  const Stage s = MakeStage(sigma_s, m);
  const MatrixXd rt = Resolvent(sigma_t, t.tau);
  const MatrixXd rs = Resolvent(sigma_s, s.tau);
  const MatrixXd ht = SqrtPsd(sigma_t);
  const MatrixXd hs = SqrtPsd(sigma_s);
  const MatrixXd eye = Identity(p);

  TwoStageTerms out;
  const VectorXd resid = ht * (eye - t.theta * s.theta) * beta_star;
  out.term1 = resid.squaredNorm();

  const double kappa_s = static_cast<double>(p) / m;
  const VectorXd x_mean = s.theta * beta_star;
  const double surrogate_err = (hs * (x_mean - beta_star)).squaredNorm();
  // gamma_s^2 = kappa_s (sigma_s^2 + err + gamma_s^2 tr(theta_s^2)/p)
  out.gamma_s_sq = kappa_s * (sigma_s_sq + surrogate_err) / (1.0 - kappa_s * s.trace_sq / p);

  const double kappa_t = static_cast<double>(p) / n;
  const double denom = 1.0 - t.trace_sq / n;
  const double tt2 = t.tau * t.tau;
  const double mean_part = tt2 * (rt * ht * x_mean).squaredNorm();
  const double noise_trace = (hs * rs * ht * rt * rt * ht * rs * hs).trace();
  out.expected_gamma_t_sq =
      kappa_t * (sigma_t_sq + mean_part) / denom +
      kappa_t * tt2 * out.gamma_s_sq / p * noise_trace / denom;
  out.term2 = out.expected_gamma_t_sq / p * t.trace_sq;
  out.term3 = out.gamma_s_sq / p *
              (hs * rs * sigma_t * rt * sigma_t * rt * sigma_t * rs * hs).trace();
  return out;
}

}  // namespace w2s::dense
