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

#include "w2s/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "compensated_sum.hpp"
#include "w2s/error.hpp"
#include "w2s/seeding.hpp"

namespace w2s {

void ProblemInstance::Validate() const {
  const auto p = static_cast<Eigen::Index>(spectrum_t.size());
  if (static_cast<Eigen::Index>(spectrum_s.size()) != p || beta_star.size() != p) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spectrum_t, spectrum_s and beta_star must share length p");
  }
  if (!(sigma_t_sq >= 0.0) || !(sigma_s_sq >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "noise variances must be >= 0");
  }
  if (n < 1 || m < 1) throw Error(ErrorCode::kInvalidParameter, "n and m must be >= 1");
}

Dataset SampleDataset(const Spectrum& spectrum, const Eigen::VectorXd& beta, double sigma_sq,
                      int count, std::uint64_t seed) {
  const auto p = static_cast<Eigen::Index>(spectrum.size());
  if (beta.size() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "beta length " + std::to_string(beta.size()) +
                                                   " != spectrum length " + std::to_string(p));
  }
  if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "sigma_sq must be >= 0");
  if (count < 1) throw Error(ErrorCode::kInvalidParameter, "count must be >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::ArrayXd scale = spectrum.values().array().sqrt();

  Dataset d;
  d.seed = seed;
  d.design.resize(count, p);
  for (int i = 0; i < count; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) d.design(i, j) = scale[j] * normal(rng);
  }
  const double sd = std::sqrt(sigma_sq);
  Eigen::VectorXd noise(count);
  for (int i = 0; i < count; ++i) noise[i] = sd * normal(rng);
  d.labels = d.design * beta + noise;
  return d;
}

struct PseudoInverseSolver::Impl {
  Eigen::MatrixXd design;
  Eigen::BDCSVD<Eigen::MatrixXd> svd;
  Eigen::Index rank = 0;
  Eigen::Index min_dim = 0;
  double cutoff = 0.0;
};

PseudoInverseSolver::PseudoInverseSolver(const Eigen::MatrixXd& design)
    : impl_(std::make_unique<Impl>()) {
  if (design.rows() == 0 || design.cols() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "empty design");
  }
  impl_->design = design;
  impl_->svd.compute(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = impl_->svd.singularValues();
  impl_->min_dim = s.size();
  const double smax = s.size() > 0 ? s[0] : 0.0;
  impl_->cutoff = smax * static_cast<double>(std::max(design.rows(), design.cols())) *
                  std::numeric_limits<double>::epsilon();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > impl_->cutoff) ++r;
  impl_->rank = r;
}

PseudoInverseSolver::~PseudoInverseSolver() = default;
PseudoInverseSolver::PseudoInverseSolver(PseudoInverseSolver&&) noexcept = default;
PseudoInverseSolver& PseudoInverseSolver::operator=(PseudoInverseSolver&&) noexcept = default;

Eigen::Index PseudoInverseSolver::rank() const { return impl_->rank; }

EstimatorOutput PseudoInverseSolver::Solve(const Eigen::VectorXd& labels) const {
  const Impl& m = *impl_;
  if (labels.size() != m.design.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels length does not match design rows");
  }
  const Eigen::Index r = m.rank;
  const auto& u = m.svd.matrixU();
  const auto& v = m.svd.matrixV();
  const Eigen::VectorXd& s = m.svd.singularValues();

  EstimatorOutput out;
  Eigen::VectorXd coef = u.leftCols(r).transpose() * labels;
  coef.array() /= s.head(r).array();
  out.beta_hat = v.leftCols(r) * coef;
  out.regime = m.design.rows() < m.design.cols() ? Regime::kMinNormInterpolator
                                                 : Regime::kOrdinaryLeastSquares;
  out.rank = r;
  out.rank_deficient = r < m.min_dim;
  return out;
}

Eigen::MatrixXd PseudoInverseSolver::NullSpaceBasis() const {
  const Eigen::Index p = impl_->design.cols();
  if (p > 64) throw Error(ErrorCode::kTooLarge, "null space basis limited to p <= 64");
  Eigen::JacobiSVD<Eigen::MatrixXd> full(impl_->design, Eigen::ComputeFullV);
  return full.matrixV().rightCols(p - impl_->rank);
}

EstimatorOutput Fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels) {
  return PseudoInverseSolver(design).Solve(labels);
}

EstimatorOutput TargetStageFit(const Spectrum& spectrum_t, const Eigen::VectorXd& beta_s,
                               double sigma_t_sq, int n, std::uint64_t seed,
                               const TwoStageOptions& options) {
  const double noise = options.noiseless_distillation ? 0.0 : sigma_t_sq;
  const Dataset d = SampleDataset(spectrum_t, beta_s, noise, n, seed);
  return Fit(d.design, d.labels);
}

TwoStageOutput TwoStageFit(const ProblemInstance& inst, std::uint64_t seed,
                           const TwoStageOptions& options) {
  inst.Validate();
  const Dataset surrogate =
      SampleDataset(inst.spectrum_s, inst.beta_star, inst.sigma_s_sq, inst.m, DeriveSeed(seed, 1, 0));
  TwoStageOutput out;
  out.beta_s = Fit(surrogate.design, surrogate.labels).beta_hat;
  out.beta_s2t = TargetStageFit(inst.spectrum_t, out.beta_s, inst.sigma_t_sq, inst.n,
                                DeriveSeed(seed, 2, 0), options)
                     .beta_hat;
  return out;
}

double EmpiricalExcessRisk(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star,
                           const Spectrum& spectrum) {
  const Eigen::VectorXd& l = spectrum.values();
  if (beta_hat.size() != beta_star.size() || beta_hat.size() != l.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "excess risk inputs must share length p");
  }
  return internal::SumTailFirst(l.size(), [&](long j) {
    const double d = beta_hat[j] - beta_star[j];
    return l[j] * d * d;
  });
}

Eigen::VectorXd ApplyMask(const Eigen::VectorXd& beta, const std::vector<int>& support) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(beta.size());
  for (int i : support) {
    if (i < 0 || i >= beta.size()) {
      throw Error(ErrorCode::kOutOfRange, "mask index " + std::to_string(i) + " outside [0, " +
                                              std::to_string(beta.size()) + ")");
    }
    out[i] = beta[i];
  }
  return out;
}

}  // namespace w2s
