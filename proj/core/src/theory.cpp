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

#include "w2s/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "compensated_sum.hpp"
#include "w2s/error.hpp"

namespace w2s {
namespace {

using internal::SumTailFirst;

void RequireLength(const Eigen::VectorXd& v, std::size_t p, const char* what) {
  if (static_cast<std::size_t>(v.size()) != p) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " has length " +
                                                   std::to_string(v.size()) + ", expected " +
                                                   std::to_string(p));
  }
}

double OneMinusOmega(const SpectralStats& stats) {
  const double d = 1.0 - stats.omega;
  if (!(d > 0.0)) {
    throw Error(ErrorCode::kInternalInconsistency,
                "Omega >= 1 (" + std::to_string(stats.omega) + ") at a fixed point");
  }
  return d;
}

// sum lambda zeta^2 v^2
double ShrunkEnergy(const SpectralStats& stats, const Spectrum& spectrum,
                    const Eigen::VectorXd& v) {
  const Eigen::VectorXd& l = spectrum.values();
  const Eigen::VectorXd& z = stats.zeta;
  return SumTailFirst(l.size(), [&](long i) { return l[i] * z[i] * z[i] * v[i] * v[i]; });
}

}  // namespace

SpectralCoordinates ToSpectralCoordinates(const Eigen::MatrixXd& covariance,
                                          const Eigen::VectorXd& beta) {
  const Eigen::Index p = covariance.rows();
  if (p == 0 || covariance.cols() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance must be square and non-empty");
  }
  if (beta.size() != p) throw Error(ErrorCode::kDimensionMismatch, "beta length != p");
  const double scale = covariance.cwiseAbs().maxCoeff();
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::kNotPositiveDefinite, "covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "eigendecomposition failed");
  }
  // Eigen returns ascending order; flip to non-increasing.
  Eigen::VectorXd lambda = eig.eigenvalues().reverse();
  Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
  if (!(lambda[p - 1] > 0.0)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "covariance has a non-positive eigenvalue");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index k;
    u.col(j).cwiseAbs().maxCoeff(&k);
    if (u(k, j) < 0.0) u.col(j) *= -1.0;
  }
  const Eigen::MatrixXd rebuilt = u * lambda.asDiagonal() * u.transpose();
  if ((rebuilt - covariance).norm() > 1e-8 * covariance.norm()) {
    throw Error(ErrorCode::kInternalInconsistency, "eigendecomposition does not reconstruct input");
  }
  Eigen::VectorXd beta_bar = u.transpose() * beta;
  return SpectralCoordinates{Spectrum(std::move(lambda)), std::move(beta_bar), std::move(u)};
}

double GammaTSq(const SpectralStats& stats, const Spectrum& spectrum,
                const Eigen::VectorXd& beta_s, double sigma_sq) {
  RequireLength(beta_s, spectrum.size(), "beta_s");
  RequireLength(stats.zeta, spectrum.size(), "zeta");
  return stats.kappa() * (sigma_sq + ShrunkEnergy(stats, spectrum, beta_s)) / OneMinusOmega(stats);
}

RiskReport OneStageRisk(const SpectralStats& stats, const Spectrum& spectrum,
                        const Eigen::VectorXd& beta_star, const Eigen::VectorXd& beta_s,
                        double sigma_sq) {
  const std::size_t p = spectrum.size();
  RequireLength(beta_star, p, "beta_star");
  RequireLength(beta_s, p, "beta_s");
  RequireLength(stats.zeta, p, "zeta");
  if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "sigma_sq must be >= 0");
  const Eigen::VectorXd& l = spectrum.values();

  RiskReport r;
  // The four quadratic forms of the definition collapse to one square per
  // coordinate in the eigenbasis.
  r.bias = SumTailFirst(l.size(), [&](long i) {
    const double d = (l[i] / (l[i] + stats.tau)) * beta_s[i] - beta_star[i];
    return l[i] * d * d;
  });
  r.variance = stats.omega * (sigma_sq + ShrunkEnergy(stats, spectrum, beta_s)) /
               OneMinusOmega(stats);
  r.total = r.bias + r.variance;
  return r;
}

RiskReport OneStageRisk(const Spectrum& spectrum, const Eigen::VectorXd& beta_star,
                        const Eigen::VectorXd& beta_s, int n, double sigma_sq) {
  return OneStageRisk(SolveTau(spectrum, n), spectrum, beta_star, beta_s, sigma_sq);
}

RiskReport OmniscientRisk(const SpectralStats& stats, const Spectrum& spectrum,
                          const Eigen::VectorXd& beta_bar, double sigma_sq) {
  RequireLength(beta_bar, spectrum.size(), "beta_bar");
  if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "sigma_sq must be >= 0");
  const double b = ShrunkEnergy(stats, spectrum, beta_bar);
  const double om = OneMinusOmega(stats);
  RiskReport r;
  r.bias = b;
  r.variance = stats.omega * (sigma_sq + b) / om;
  r.total = (sigma_sq * stats.omega + b) / om;
  return r;
}

RiskReport OmniscientRisk(const Spectrum& spectrum, const Eigen::VectorXd& beta_bar,
                          double sigma_sq, int n) {
  return OmniscientRisk(SolveTau(spectrum, n), spectrum, beta_bar, sigma_sq);
}

TwoStageTerms TwoStageRiskTerms(const ProblemInstance& inst) {
  inst.Validate();
  const int p = inst.p();
  if (inst.m >= p || inst.n >= p) {
    throw Error(ErrorCode::kHypothesisViolated,
                "two-stage risk needs m < p and n < p (m=" + std::to_string(inst.m) +
                    ", n=" + std::to_string(inst.n) + ", p=" + std::to_string(p) + ")");
  }
  const SpectralStats ss = SolveTau(inst.spectrum_s, inst.m);
  const SpectralStats st = SolveTau(inst.spectrum_t, inst.n);
  const Eigen::VectorXd& ls = inst.spectrum_s.values();
  const Eigen::VectorXd& lt = inst.spectrum_t.values();
  const Eigen::VectorXd& b = inst.beta_star;
  const auto keep_s = [&](long i) { return ls[i] / (ls[i] + ss.tau); };  // 1 - zeta_s
  const auto keep_t = [&](long i) { return lt[i] / (lt[i] + st.tau); };  // 1 - zeta_t
  const long len = p;

  TwoStageTerms t;
  t.term1 = SumTailFirst(len, [&](long i) {
    const double r = 1.0 - keep_t(i) * keep_s(i);
    return lt[i] * r * r * b[i] * b[i];
  });
  t.gamma_s_sq = ss.kappa() * (inst.sigma_s_sq + ShrunkEnergy(ss, inst.spectrum_s, b)) /
                 OneMinusOmega(ss);

  const double mean_part = SumTailFirst(len, [&](long i) {
    const double zt = st.zeta[i];
    const double ks = keep_s(i);
    return lt[i] * zt * zt * ks * ks * b[i] * b[i];
  });
  const double noise_part = SumTailFirst(len, [&](long i) {
    const double zt = st.zeta[i];
    const double ks = keep_s(i);
    return lt[i] * zt * zt * ks * ks / ls[i];
  });
  t.expected_gamma_t_sq =
      st.kappa() * (inst.sigma_t_sq + mean_part + t.gamma_s_sq / p * noise_part) /
      OneMinusOmega(st);
  t.term2 = t.expected_gamma_t_sq * st.n * st.omega / p;
  t.term3 = t.gamma_s_sq / p * SumTailFirst(len, [&](long i) {
              const double kt = keep_t(i);
              const double ks = keep_s(i);
              return lt[i] * kt * kt * ks * ks / ls[i];
            });
  return t;
}

RiskReport TwoStageRisk(const ProblemInstance& inst) {
  const TwoStageTerms t = TwoStageRiskTerms(inst);
  RiskReport r;
  r.bias = t.term1;
  r.variance = t.term2 + t.term3;
  r.total = r.bias + r.variance;
  return r;
}

Eigen::VectorXd CovarianceShiftMap(const Eigen::VectorXd& beta_star, const Spectrum& spectrum_s,
                                   const Spectrum& spectrum_t) {
  const std::size_t p = spectrum_t.size();
  if (spectrum_s.size() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "surrogate and target spectra differ in length");
  }
  RequireLength(beta_star, p, "beta_star");
  return (spectrum_s.values().array() / spectrum_t.values().array()).sqrt() * beta_star.array();
}

}  // namespace w2s
