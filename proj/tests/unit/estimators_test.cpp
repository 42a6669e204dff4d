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

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "test_util.hpp"
#include "w2s/harness/monte_carlo.hpp"
#include "w2s/seeding.hpp"
#include "w2s/theory.hpp"

namespace w2s {
namespace {

using testing::CodeOf;
using testing::RandInt;
using testing::RandomSpectrum;
using testing::RandomVector;

TEST(Seeding, ChildSeedsDiffer) {
  EXPECT_NE(DeriveSeed(1, 2, 3), DeriveSeed(1, 3, 2));
  EXPECT_NE(DeriveSeed(1, 2, 3), DeriveSeed(2, 2, 3));
  EXPECT_EQ(DeriveSeed(7, 1, 0), DeriveSeed(7, 1, 0));
}

TEST(SampleDataset, ZeroSignalZeroNoiseGivesZeroLabels) {
  const Dataset d = SampleDataset(PowerLawSpectrum(5, 2.0), Eigen::VectorXd::Zero(5), 0.0, 7, 1);
  EXPECT_EQ(d.labels.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(d.design.rows(), 7);
}

TEST(SampleDataset, CovarianceLawOfLargeNumbers) {
  const Spectrum s(std::vector<double>{1, 1, 1});
  const Dataset d = SampleDataset(s, Eigen::VectorXd::Zero(3), 0.0, 10000, 99);
  const Eigen::MatrixXd cov = d.design.transpose() * d.design / 10000.0;
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(cov(j, j), 1.0, 0.05);
}

TEST(SampleDataset, DeterministicPerSeed) {
  const Spectrum s = PowerLawSpectrum(20, 2.0);
  const Eigen::VectorXd b = PowerLawSignal(20, 2.0, 1.5);
  const Dataset a = SampleDataset(s, b, 0.5, 10, 5);
  const Dataset c = SampleDataset(s, b, 0.5, 10, 5);
  const Dataset e = SampleDataset(s, b, 0.5, 10, 6);
  EXPECT_TRUE(a.design == c.design);
  EXPECT_TRUE(a.labels == c.labels);
  EXPECT_FALSE(a.design == e.design);
}

TEST(SampleDataset, DimensionMismatch) {
  EXPECT_EQ(CodeOf([] { SampleDataset(PowerLawSpectrum(4, 2), Eigen::VectorXd::Zero(3), 0, 2, 1); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Fit, SingleRowMinNorm) {
  Eigen::MatrixXd x(1, 2);
  x << 1, 0;
  Eigen::VectorXd y(1);
  y << 3;
  const EstimatorOutput e = Fit(x, y);
  EXPECT_NEAR(e.beta_hat[0], 3.0, 1e-15);
  EXPECT_NEAR(e.beta_hat[1], 0.0, 1e-15);
  EXPECT_EQ(e.regime, Regime::kMinNormInterpolator);
  EXPECT_FALSE(e.rank_deficient);
}

TEST(Fit, NoiselessInterpolationAndNormContraction) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 10; ++k) {
    const int p = RandInt(rng, 10, 80), n = RandInt(rng, 1, p - 1);
    const Spectrum s = RandomSpectrum(rng, p);
    const Eigen::VectorXd b = RandomVector(rng, p);
    const Dataset d = SampleDataset(s, b, 0.0, n, DeriveSeed(1, 2, k));
    const EstimatorOutput e = Fit(d.design, d.labels);
    EXPECT_LE((d.design * e.beta_hat - d.labels).norm(), 1e-8 * d.labels.norm());
    EXPECT_LE(e.beta_hat.norm(), b.norm() * (1 + 1e-12));
  }
}

TEST(Fit, OverdeterminedMatchesNormalEquations) {
  std::mt19937_64 rng(22);
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(5, 3, [&] { return std::normal_distribution<>()(rng); });
  const Eigen::VectorXd y = RandomVector(rng, 5);
  // Independent route: LU solve of X^T X b = X^T y.
  const Eigen::VectorXd ref = (x.transpose() * x).fullPivLu().solve(x.transpose() * y);
  const EstimatorOutput e = Fit(x, y);
  EXPECT_EQ(e.regime, Regime::kOrdinaryLeastSquares);
  EXPECT_LE((e.beta_hat - ref).norm(), 1e-12 * ref.norm());
}

TEST(Fit, RankDeficiencyIsReportedNotFatal) {
  Eigen::MatrixXd x(3, 5);
  x << 1, 2, 3, 4, 5,
       2, 4, 6, 8, 10,
       0, 1, 0, 1, 0;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  const EstimatorOutput e = Fit(x, y);
  EXPECT_TRUE(e.rank_deficient);
  EXPECT_EQ(e.rank, 2);
  // Consistent system: still interpolates.
  EXPECT_LE((x * e.beta_hat - y).norm(), 1e-10);
}

TEST(FitProperty, MinNormMinimality) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    const int p = RandInt(rng, 6, 40), n = RandInt(rng, 1, p - 2);
    const Dataset d = SampleDataset(RandomSpectrum(rng, p), RandomVector(rng, p), 0.2, n, DeriveSeed(3, 0, k));
    const PseudoInverseSolver solver(d.design);
    const Eigen::VectorXd b = solver.Solve(d.labels).beta_hat;
    const Eigen::MatrixXd null = solver.NullSpaceBasis();
    ASSERT_EQ(null.cols(), p - n);
    EXPECT_LE((null.transpose() * b).cwiseAbs().maxCoeff(), 1e-10 * b.norm());
    for (int j = 0; j < 20; ++j) {
      const Eigen::VectorXd v = null * RandomVector(rng, static_cast<int>(null.cols()));
      EXPECT_LE(b.norm(), (b + v).norm());
    }
  }
}

TEST(TwoStageFit, OverdeterminedNoiselessRecoversTruth) {
  const Spectrum s = PowerLawSpectrum(8, 1.5);
  const Eigen::VectorXd b = PowerLawSignal(8, 1.5, 2.0);
  ProblemInstance inst{s, s, b, 0.3, 0.0, 5, 30};
  const TwoStageOutput o = TwoStageFit(inst, 17);
  EXPECT_LE((o.beta_s - b).norm(), 1e-10 * b.norm());
}

TEST(TwoStageFit, NoiselessTargetWithEnoughDataCopiesSurrogate) {
  const Spectrum s = PowerLawSpectrum(6, 2.0);
  const Eigen::VectorXd b = PowerLawSignal(6, 2.0, 1.5);
  ProblemInstance inst{s, s, b, 0.0, 0.5, 12, 4};
  const TwoStageOutput o = TwoStageFit(inst, 18);
  EXPECT_LE((o.beta_s2t - o.beta_s).norm(), 1e-9 * (1 + o.beta_s.norm()));
}

TEST(TwoStageFit, NoiselessDistillationSwitch) {
  const Spectrum s = PowerLawSpectrum(6, 2.0);
  const Eigen::VectorXd bs = PowerLawSignal(6, 2.0, 1.5);
  TwoStageOptions quiet;
  quiet.noiseless_distillation = true;
  const EstimatorOutput a = TargetStageFit(s, bs, 5.0, 12, 3, quiet);
  EXPECT_LE((a.beta_hat - bs).norm(), 1e-9);
  const EstimatorOutput b = TargetStageFit(s, bs, 5.0, 12, 3);
  EXPECT_GT((b.beta_hat - bs).norm(), 1e-3);
}

TEST(ExcessRisk, Values) {
  const Spectrum s(std::vector<double>{1.0, 0.25});
  Eigen::VectorXd b(2), h(2);
  b << 0.3, -1;
  h << 1.3, 1;
  EXPECT_DOUBLE_EQ(EmpiricalExcessRisk(b, b, s), 0.0);
  EXPECT_NEAR(EmpiricalExcessRisk(h, b, s), 2.0, 1e-15);
  EXPECT_EQ(CodeOf([&] { EmpiricalExcessRisk(Eigen::VectorXd::Zero(3), b, s); }),
            ErrorCode::kDimensionMismatch);
}

TEST(ExcessRisk, JointPermutationInvariance) {
  // Ties let us permute coordinates without breaking the ordering.
  const Spectrum s(std::vector<double>{2, 1, 1, 1});
  Eigen::VectorXd b(4), h(4), bp(4), hp(4);
  b << 1, 2, 3, 4;
  h << 0, 1, -1, 2;
  bp << 1, 4, 2, 3;
  hp << 0, 2, 1, -1;
  EXPECT_DOUBLE_EQ(EmpiricalExcessRisk(h, b, s), EmpiricalExcessRisk(hp, bp, s));
}

TEST(ApplyMask, Cases) {
  Eigen::VectorXd b(2);
  b << 2, 3;
  EXPECT_TRUE(ApplyMask(b, {0, 1}) == b);
  EXPECT_TRUE(ApplyMask(b, {}) == Eigen::VectorXd::Zero(2));
  const Eigen::VectorXd m = ApplyMask(b, {0});
  EXPECT_EQ(m[0], 2.0);
  EXPECT_EQ(m[1], 0.0);
  EXPECT_EQ(CodeOf([&] { ApplyMask(b, {2}); }), ErrorCode::kOutOfRange);
}

// Target stage with a fixed surrogate vs the closed form, p=400, n=160.
TEST(SimulationAgreement, FixedSurrogateTargetStage) {
  const int p = 400, n = 160;
  const Spectrum s = PowerLawSpectrum(p, 2.0);
  const Eigen::VectorXd bstar = PowerLawSignal(p, 2.0, 1.5);
  std::mt19937_64 rng(24);
  const Eigen::VectorXd bs = bstar + RandomVector(rng, p, 0.05);
  const auto mc = harness::OneStageMonteCarlo(s, bstar, {bstar, bs}, n, 0.05, 200, 123, 1);
  const SpectralStats st = SolveTau(s, n);
  const double th_gt = OneStageRisk(st, s, bstar, bstar, 0.05).total;
  const double th_bs = OneStageRisk(st, s, bstar, bs, 0.05).total;
  EXPECT_LE(std::abs(mc.per_kind[0].mean - th_gt), 3 * mc.per_kind[0].se);
  EXPECT_LE(std::abs(mc.per_kind[1].mean - th_bs), 3 * mc.per_kind[1].se);
}

}  // namespace
}  // namespace w2s
