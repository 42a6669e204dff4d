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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "w2s/dense_reference.hpp"

namespace w2s {
namespace {

using testing::CodeOf;
using testing::RandInt;
using testing::RandomSpectrum;
using testing::RandomVector;
using testing::RelDiff;

const Spectrum kTwo(std::vector<double>{1.0, 0.25});
const Spectrum kIso4(std::vector<double>{1, 1, 1, 1});

Eigen::VectorXd Vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(Gamma, HandValues) {
  const SpectralStats st = SolveTau(kTwo, 1);
  EXPECT_NEAR(GammaTSq(st, kTwo, Vec({1, 1}), 0.0), 1.0, 1e-10);
  EXPECT_EQ(GammaTSq(st, kTwo, Vec({0, 0}), 0.0), 0.0);
}

TEST(Gamma, SolvesImplicitEquation) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const int p = RandInt(rng, 3, 200);
    const Spectrum s = RandomSpectrum(rng, p);
    const SpectralStats st = SolveTau(s, RandInt(rng, 1, p - 1));
    const Eigen::VectorXd b = RandomVector(rng, p);
    const double sig = 0.7;
    const double g = GammaTSq(st, s, b, sig);
    double shrunk = 0;
    for (int i = 0; i < p; ++i) shrunk += s[static_cast<std::size_t>(i)] * st.zeta[i] * st.zeta[i] * b[i] * b[i];
    // R(b, b) carries gamma itself through the Omega gamma^2 / kappa variance term.
    const double rhs = st.kappa() * (sig + shrunk + st.omega * g / st.kappa());
    EXPECT_LT(RelDiff(g, rhs), 1e-10);
    EXPECT_GE(g, st.kappa() * sig);
  }
}

TEST(OneStage, HandValue) {
  const RiskReport r = OneStageRisk(kTwo, Vec({1, 1}), Vec({1, 1}), 1, 0.0);
  EXPECT_NEAR(r.total, 0.5, 1e-10);
  EXPECT_NEAR(r.bias + r.variance, r.total, 1e-15);
}

TEST(OneStage, RejectsBadShapes) {
  EXPECT_EQ(CodeOf([] { OneStageRisk(kTwo, Vec({1}), Vec({1, 1}), 1, 0.0); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { OneStageRisk(kTwo, Vec({1, 1}), Vec({1, 1}), 2, 0.0); }),
            ErrorCode::kNoSolution);
}

TEST(Omniscient, HandValues) {
  EXPECT_EQ(OmniscientRisk(kTwo, Vec({0, 0}), 0.0, 1).total, 0.0);
  EXPECT_NEAR(OmniscientRisk(kTwo, Vec({1, 1}), 0.0, 1).total, 0.5, 1e-10);
  EXPECT_NEAR(OmniscientRisk(kIso4, Eigen::VectorXd::Zero(4), 1.0, 2).total, 1.0, 1e-10);
}

TEST(Omniscient, EqualsOneStageAtGroundTruth) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 30; ++k) {
    const int p = RandInt(rng, 2, 300);
    const Spectrum s = RandomSpectrum(rng, p);
    const SpectralStats st = SolveTau(s, RandInt(rng, 1, p - 1));
    const Eigen::VectorXd b = RandomVector(rng, p);
    EXPECT_LT(RelDiff(OmniscientRisk(st, s, b, 0.4).total, OneStageRisk(st, s, b, b, 0.4).total), 1e-12);
  }
}

TEST(DiagonalCollapse, OneStageMatchesDenseResolventForm) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 15; ++k) {
    const int p = RandInt(rng, 2, 50), n = RandInt(rng, 1, p - 1);
    const Spectrum s = RandomSpectrum(rng, p);
    const Eigen::VectorXd bstar = RandomVector(rng, p), bs = RandomVector(rng, p);
    const Eigen::MatrixXd u = dense::RandomOrthogonal(p, 100 + k);
    const RiskReport a = OneStageRisk(s, bstar, bs, n, 0.3);
    const RiskReport b = dense::OneStageRisk(dense::Compose(u, s.values()), u * bstar, u * bs, n, 0.3);
    EXPECT_LT(RelDiff(a.total, b.total), 1e-10) << "p=" << p << " n=" << n;
    EXPECT_LT(RelDiff(a.bias, b.bias), 1e-10);
    EXPECT_LT(RelDiff(a.variance, b.variance), 1e-10);
    EXPECT_LT(RelDiff(GammaTSq(SolveTau(s, n), s, bs, 0.3),
                      dense::GammaTSq(dense::Compose(u, s.values()), u * bs, n, 0.3)),
              1e-10);
  }
}

TEST(DiagonalCollapse, TwoStageMatchesDenseTraceForm) {
  std::mt19937_64 rng(34);
  for (int k = 0; k < 15; ++k) {
    const int p = RandInt(rng, 2, 50);
    const int n = RandInt(rng, 1, p - 1), m = RandInt(rng, 1, p - 1);
    const Spectrum st = RandomSpectrum(rng, p), ss = RandomSpectrum(rng, p);
    const Eigen::VectorXd b = RandomVector(rng, p);
    const Eigen::MatrixXd u = dense::RandomOrthogonal(p, 200 + k);
    const TwoStageTerms a = TwoStageRiskTerms(ProblemInstance{st, ss, b, 0.2, 0.6, n, m});
    const TwoStageTerms d = dense::TwoStageRiskTerms(dense::Compose(u, st.values()),
                                                     dense::Compose(u, ss.values()), u * b, 0.2,
                                                     0.6, n, m);
    EXPECT_LT(RelDiff(a.term1, d.term1), 1e-10);
    EXPECT_LT(RelDiff(a.term2, d.term2), 1e-10);
    EXPECT_LT(RelDiff(a.term3, d.term3), 1e-10);
    EXPECT_LT(RelDiff(a.gamma_s_sq, d.gamma_s_sq), 1e-10);
    EXPECT_LT(RelDiff(a.expected_gamma_t_sq, d.expected_gamma_t_sq), 1e-10);
  }
}

TEST(TwoStage, ZeroSignalZeroNoiseIsZero) {
  const Spectrum s = PowerLawSpectrum(30, 2.0);
  const RiskReport r = TwoStageRisk(ProblemInstance{s, s, Eigen::VectorXd::Zero(30), 0, 0, 10, 12});
  EXPECT_EQ(r.total, 0.0);
}

TEST(TwoStage, RejectsNonOverparametrizedStages) {
  const Spectrum s = PowerLawSpectrum(30, 2.0);
  const Eigen::VectorXd b = PowerLawSignal(30, 2.0, 1.5);
  EXPECT_EQ(CodeOf([&] { TwoStageRisk(ProblemInstance{s, s, b, 0, 0, 30, 10}); }),
            ErrorCode::kHypothesisViolated);
  EXPECT_EQ(CodeOf([&] { TwoStageRisk(ProblemInstance{s, s, b, 0, 0, 10, 31}); }),
            ErrorCode::kHypothesisViolated);
  EXPECT_EQ(CodeOf([&] { TwoStageRisk(ProblemInstance{s, PowerLawSpectrum(29, 2.0), b, 0, 0, 10, 10}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(TwoStage, ApproachesOneStageAsSurrogateSaturates) {
  // m = p - 1, noiseless surrogate, shared covariance: beta_s -> beta_star.
  const int p = 4000;
  const Spectrum s = PowerLawSpectrum(p, 1.5);
  const Eigen::VectorXd b = PowerLawSignal(p, 1.5, 2.0);
  const double two = TwoStageRisk(ProblemInstance{s, s, b, 0.05, 0.0, 200, p - 1}).total;
  const double one = OneStageRisk(s, b, b, 200, 0.05).total;
  EXPECT_LT(RelDiff(two, one), 2e-2) << two << " vs " << one;
}

TEST(SpectralCoordinates, DiagonalInputIsIdentity) {
  Eigen::MatrixXd c = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const SpectralCoordinates sc = ToSpectralCoordinates(c, Eigen::Vector3d(1, 2, 3));
  EXPECT_LE((sc.basis - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((sc.beta_bar - Eigen::Vector3d(1, 2, 3)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(sc.spectrum[0], 3.0, 1e-14);
}

TEST(SpectralCoordinates, RotatedTwoByTwo) {
  const double th = 0.3;
  Eigen::Matrix2d r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Eigen::MatrixXd c = r * Eigen::Vector2d(1.0, 0.25).asDiagonal() * r.transpose();
  const Eigen::Vector2d beta(0.7, -1.1);
  const SpectralCoordinates sc = ToSpectralCoordinates(c, beta);
  EXPECT_NEAR(sc.spectrum[0], 1.0, 1e-14);
  EXPECT_NEAR(sc.spectrum[1], 0.25, 1e-14);
  // Columns of r already have a positive largest entry, so the basis is r.
  const Eigen::Vector2d expected = r.transpose() * beta;
  EXPECT_NEAR(sc.beta_bar[0], expected[0], 1e-14);
  EXPECT_NEAR(sc.beta_bar[1], expected[1], 1e-14);
  const Eigen::Vector2d h(0.1, 0.2);
  EXPECT_NEAR((h - beta).dot(c * (h - beta)),
              EmpiricalExcessRisk(sc.basis.transpose() * h, sc.beta_bar, sc.spectrum), 1e-14);
}

TEST(SpectralCoordinates, RejectsNonPositiveDefinite) {
  Eigen::Matrix2d c;
  c << 1, 2, 2, 1;
  EXPECT_EQ(CodeOf([&] { ToSpectralCoordinates(c, Eigen::Vector2d(1, 1)); }),
            ErrorCode::kNotPositiveDefinite);
  c << 1, 0.5, 0.1, 1;
  EXPECT_EQ(CodeOf([&] { ToSpectralCoordinates(c, Eigen::Vector2d(1, 1)); }),
            ErrorCode::kNotPositiveDefinite);
}

TEST(CovarianceShiftMap, Cases) {
  const Spectrum t = PowerLawSpectrum(5, 2.0);
  const Eigen::VectorXd b = PowerLawSignal(5, 2.0, 1.5);
  EXPECT_LE((CovarianceShiftMap(b, t, t) - b).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((CovarianceShiftMap(b, t.Scaled(4.0), t) - 2.0 * b).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(CodeOf([&] { CovarianceShiftMap(b, PowerLawSpectrum(4, 2.0), t); }),
            ErrorCode::kDimensionMismatch);
}

TEST(TheoryProperty, MonotoneInNoiseAndPositive) {
  std::mt19937_64 rng(35);
  for (int k = 0; k < 30; ++k) {
    const int p = RandInt(rng, 2, 100);
    const Spectrum s = RandomSpectrum(rng, p);
    const SpectralStats st = SolveTau(s, RandInt(rng, 1, p - 1));
    const Eigen::VectorXd bstar = RandomVector(rng, p), bs = RandomVector(rng, p);
    double prev = -1;
    for (double sig : {0.0, 0.01, 0.3, 1.0, 5.0}) {
      const RiskReport r = OneStageRisk(st, s, bstar, bs, sig);
      EXPECT_GT(r.total, prev);
      EXPECT_GE(r.bias, 0.0);
      EXPECT_GT(r.variance, 0.0);
      prev = r.total;
    }
  }
}

TEST(TheoryProperty, IsotropicMinimizerIsGroundTruth) {
  std::mt19937_64 rng(36);
  for (int k = 0; k < 10; ++k) {
    const int p = RandInt(rng, 3, 60);
    const Spectrum s(std::vector<double>(static_cast<std::size_t>(p), 0.5 + k));
    const SpectralStats st = SolveTau(s, RandInt(rng, 1, p - 1));
    const Eigen::VectorXd b = RandomVector(rng, p);
    const double best = OneStageRisk(st, s, b, b, 0.1).total;
    for (int j = 0; j < 100; ++j) {
      EXPECT_GT(OneStageRisk(st, s, b, b + RandomVector(rng, p, 1e-2), 0.1).total, best);
    }
  }
}

}  // namespace
}  // namespace w2s
