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

#include "w2s/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "w2s/error.hpp"

namespace w2s {
namespace {

// Independent root finder: long-double arithmetic bisection on tau with a
// naive forward sum. Shares nothing with SolveTau beyond the equation.
long double OracleTau(const Spectrum& s, int n) {
  auto f = [&](long double tau) {
    long double acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] / (s[i] + tau);
    return acc;
  };
  long double lo = 0, hi = 1;
  while (f(hi) > n) hi *= 2;
  for (int it = 0; it < 400; ++it) {
    const long double mid = lo + (hi - lo) / 2;
    (f(mid) > n ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInternalInconsistency;
}

Spectrum RandomSpectrum(std::mt19937_64& rng, int p) {
  std::uniform_real_distribution<double> u(-4.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(p));
  for (double& x : v) x = std::pow(10.0, u(rng));
  std::sort(v.begin(), v.end(), std::greater<>());
  return Spectrum(v);
}

TEST(PowerLaw, SpectrumValues) {
  const Spectrum s = PowerLawSpectrum(3, 2.0);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 0.25);
  EXPECT_DOUBLE_EQ(s[2], 1.0 / 9.0);
  EXPECT_EQ(PowerLawSpectrum(1, 5.0).size(), 1u);
  EXPECT_DOUBLE_EQ(PowerLawSpectrum(1, 5.0)[0], 1.0);
  const Spectrum t = PowerLawSpectrum(4, 1.5);
  EXPECT_DOUBLE_EQ(t[1], std::pow(2.0, -1.5));
  EXPECT_DOUBLE_EQ(t[2], std::pow(3.0, -1.5));
  EXPECT_DOUBLE_EQ(t[3], 0.125);
}

TEST(PowerLaw, SpectrumRejectsBadInput) {
  EXPECT_EQ(CodeOf([] { PowerLawSpectrum(3, 1.0); }), ErrorCode::kInvalidParameter);
  EXPECT_EQ(CodeOf([] { PowerLawSpectrum(0, 2.0); }), ErrorCode::kInvalidParameter);
}

TEST(PowerLaw, SignalValues) {
  Eigen::VectorXd a = PowerLawSignal(2, 2.0, 2.0);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_DOUBLE_EQ(a[1], 1.0);
  Eigen::VectorXd b = PowerLawSignal(2, 2.0, 1.5);
  EXPECT_DOUBLE_EQ(b[1], std::pow(2.0, 0.25));
  Eigen::VectorXd c = PowerLawSignal(3, 3.0, 4.0);
  EXPECT_NEAR(c[1], std::pow(2.0, -0.5), 1e-15);
  EXPECT_NEAR(c[2], std::pow(3.0, -0.5), 1e-15);
  EXPECT_EQ(CodeOf([] { PowerLawSignal(3, 2.0, 1.0); }), ErrorCode::kInvalidParameter);
}

TEST(SpectrumType, Invariants) {
  EXPECT_EQ(CodeOf([] { Spectrum(std::vector<double>{}); }), ErrorCode::kInvalidParameter);
  EXPECT_EQ(CodeOf([] { Spectrum(std::vector<double>{1.0, 2.0}); }), ErrorCode::kInvalidParameter);
  EXPECT_EQ(CodeOf([] { Spectrum(std::vector<double>{1.0, 0.0}); }), ErrorCode::kInvalidParameter);
  EXPECT_NO_THROW(Spectrum(std::vector<double>{2.0, 2.0, 1.0}));  // ties are fine
}

TEST(SolveTau, IsotropicClosedForm) {
  const SpectralStats st = SolveTau(Spectrum(std::vector<double>{1, 1, 1, 1}), 2);
  EXPECT_NEAR(st.tau, 1.0, 1e-11);
  EXPECT_NEAR(st.omega, 0.5, 1e-11);
}

TEST(SolveTau, TwoEigenvalueHandSolution) {
  // 1/(1+t) + 0.25/(0.25+t) = 1  =>  t = 1/2.
  const SpectralStats st = SolveTau(Spectrum(std::vector<double>{1.0, 0.25}), 1);
  EXPECT_NEAR(st.tau, 0.5, 1e-11);
  EXPECT_NEAR(st.zeta[0], 1.0 / 3.0, 1e-11);
  EXPECT_NEAR(st.zeta[1], 2.0 / 3.0, 1e-11);
  EXPECT_NEAR(st.omega, 5.0 / 9.0, 1e-11);
  EXPECT_DOUBLE_EQ(st.kappa(), 2.0);
}

TEST(SolveTau, NoSolutionWhenNotOverparametrized) {
  const Spectrum s = PowerLawSpectrum(10, 2.0);
  EXPECT_EQ(CodeOf([&] { SolveTau(s, 10); }), ErrorCode::kNoSolution);
  EXPECT_EQ(CodeOf([&] { SolveTau(s, 20); }), ErrorCode::kNoSolution);
}

TEST(SolveTau, AgreesWithLongDoubleOracle) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const int p = std::uniform_int_distribution<int>(2, 400)(rng);
    const int n = std::uniform_int_distribution<int>(1, p - 1)(rng);
    const Spectrum s = RandomSpectrum(rng, p);
    const double tau = SolveTau(s, n).tau;
    EXPECT_NEAR(tau / static_cast<double>(OracleTau(s, n)), 1.0, 1e-10) << "p=" << p << " n=" << n;
  }
}

TEST(SolveTau, LargePowerLawMatchesAsymptoticAndOracle) {
  const int n = 100;
  const Spectrum s = PowerLawSpectrum(100000, 2.0);
  const double tau = SolveTau(s, n).tau;
  const double pi2 = std::numbers::pi / 2.0;
  EXPECT_LE(std::abs(tau - pi2 * pi2 / (n * n)) / tau, 10.0 / n);
  EXPECT_NEAR(tau / static_cast<double>(OracleTau(s, n)), 1.0, 1e-10);
}

TEST(SolveTau, UnreachableToleranceIsNonConvergence) {
  FixedPointOptions o;
  o.max_iterations = 3;
  EXPECT_EQ(CodeOf([&] { SolveTau(PowerLawSpectrum(1000, 2.0), 100, o); }),
            ErrorCode::kNonConvergence);
}

TEST(Asymptotics, TauConstant) {
  EXPECT_NEAR(TauAsymptotic(2.0, 10), 0.024674011002723395, 1e-15);
  EXPECT_NEAR(TauAsymptotic(2.0, 1), 2.4674011002723395, 1e-14);
  EXPECT_EQ(CodeOf([] { TauAsymptotic(1.0, 5); }), ErrorCode::kInvalidParameter);
}

TEST(Asymptotics, OmegaLimit) {
  EXPECT_DOUBLE_EQ(OmegaAsymptotic(2.0), 0.5);
  EXPECT_DOUBLE_EQ(OmegaAsymptotic(4.0), 0.75);
  const double near_one = OmegaAsymptotic(1.0 + 1e-9);
  EXPECT_GT(near_one, 0.0);
  EXPECT_LT(near_one, 1e-8);
  const int n = 500;
  const double om = SolveTau(PowerLawSpectrum(1000000, 4.0), n).omega;
  EXPECT_LE(std::abs(om - 0.75), 5.0 / n);
  EXPECT_EQ(CodeOf([] { OmegaAsymptotic(0.5); }), ErrorCode::kInvalidParameter);
}

TEST(TauBounds, HypothesisRatio) {
  EXPECT_NEAR(TauBoundHypothesisRatio(2.0), 0.65, 1e-15);
}

TEST(TauBounds, ContainsSolvedTau) {
  const Interval iv = TauBoundsNonAsymptotic(2.0, 1000, 100);
  EXPECT_TRUE(iv.Contains(SolveTau(PowerLawSpectrum(1000, 2.0), 100).tau));
  const Interval iv3 = TauBoundsNonAsymptotic(3.0, 10000, 50);
  EXPECT_LT(iv3.lower, iv3.upper);
  EXPECT_TRUE(iv3.Contains(SolveTau(PowerLawSpectrum(10000, 3.0), 50).tau));
}

TEST(TauBounds, RejectsOutsideHypothesis) {
  // k(2) = 0.65 so n = 99 with p = 100 violates n < p k.
  EXPECT_EQ(CodeOf([] { TauBoundsNonAsymptotic(2.0, 100, 99); }), ErrorCode::kHypothesisViolated);
  EXPECT_EQ(CodeOf([] { TauBoundsNonAsymptotic(2.0, 100, 65); }), ErrorCode::kHypothesisViolated);
  EXPECT_NO_THROW(TauBoundsNonAsymptotic(2.0, 100, 64));
}

TEST(OmegaBound, BelowExactOmega) {
  EXPECT_TRUE(OmegaBoundHypothesisHolds(5.0, 1000, 400));
  EXPECT_LT(OmegaLowerBound(5.0, 1000, 400), SolveTau(PowerLawSpectrum(1000, 5.0), 400).omega);
}

TEST(OmegaBound, HypothesisEdges) {
  // Lower edge: 1000 * 5/16 + 25/16 = 314.0625.
  EXPECT_EQ(CodeOf([] { OmegaLowerBound(5.0, 1000, 100); }), ErrorCode::kHypothesisViolated);
  EXPECT_FALSE(OmegaBoundHypothesisHolds(5.0, 1000, 314));
  EXPECT_TRUE(OmegaBoundHypothesisHolds(5.0, 1000, 315));
}

TEST(OmegaBound, BelowExactAcrossWindow) {
  const Spectrum s = PowerLawSpectrum(1000, 5.0);
  int checked = 0;
  for (int n = 320; n < 740; n += 20) {
    if (!OmegaBoundHypothesisHolds(5.0, 1000, n)) continue;
    EXPECT_LE(OmegaLowerBound(5.0, 1000, n), SolveTau(s, n).omega) << n;
    ++checked;
  }
  EXPECT_GT(checked, 15);
}

// Properties ---------------------------------------------------------------

TEST(SpectrumProperty, ResidualOrderingAndOmegaIdentity) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const int p = std::uniform_int_distribution<int>(2, 600)(rng);
    const int n = std::uniform_int_distribution<int>(1, p - 1)(rng);
    const Spectrum s = RandomSpectrum(rng, p);
    const SpectralStats st = SolveTau(s, n);
    EXPECT_LE(FixedPointResidual(s, st), 1e-12 + 1e-12 * n);
    for (int i = 1; i < p; ++i) ASSERT_GE(st.zeta[i], st.zeta[i - 1]);
    for (int i = 0; i < p; ++i) {
      ASSERT_NEAR(1.0 - st.zeta[i], s[static_cast<std::size_t>(i)] / (s[static_cast<std::size_t>(i)] + st.tau), 1e-15);
    }
    EXPECT_GT(st.omega, 0.0);
    EXPECT_LT(st.omega, 1.0);
    EXPECT_NEAR(st.omega / OmegaRatioForm(st), 1.0, 1e-10);
    EXPECT_EQ(SolveTau(s, n).tau, st.tau);  // bit-identical
  }
}

TEST(SpectrumProperty, ScaleCovariance) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    const int p = std::uniform_int_distribution<int>(2, 300)(rng);
    const int n = std::uniform_int_distribution<int>(1, p - 1)(rng);
    const Spectrum s = RandomSpectrum(rng, p);
    const double c = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(rng));
    const SpectralStats a = SolveTau(s, n);
    const SpectralStats b = SolveTau(s.Scaled(c), n);
    EXPECT_NEAR(b.tau / (c * a.tau), 1.0, 1e-9);
    EXPECT_NEAR(b.omega, a.omega, 1e-9);
    EXPECT_LE((b.zeta - a.zeta).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SpectrumProperty, BoundsSandwichOnRandomHypothesisPoints) {
  std::mt19937_64 rng(13);
  int tau_cases = 0, omega_cases = 0;
  for (int k = 0; k < 200 && (tau_cases < 30 || omega_cases < 30); ++k) {
    const double a = std::uniform_real_distribution<double>(1.2, 8.0)(rng);
    const int p = std::uniform_int_distribution<int>(100, 4000)(rng);
    const int n = std::uniform_int_distribution<int>(1, p - 1)(rng);
    if (n < p * TauBoundHypothesisRatio(a) && tau_cases < 30) {
      ++tau_cases;
      EXPECT_TRUE(TauBoundsNonAsymptotic(a, p, n).Contains(SolveTau(PowerLawSpectrum(p, a), n).tau))
          << a << " " << p << " " << n;
    }
    const double a2 = std::uniform_real_distribution<double>(4.2, 8.0)(rng);
    const double am1 = a2 - 1;
    const int lo = static_cast<int>(p * a2 / (am1 * am1) + a2 * a2 / (am1 * am1)) + 1;
    const int hi = static_cast<int>(p * TauBoundHypothesisRatio(a2));
    if (lo < hi && omega_cases < 30) {
      const int n2 = std::uniform_int_distribution<int>(lo, hi)(rng);
      if (!OmegaBoundHypothesisHolds(a2, p, n2)) continue;
      ++omega_cases;
      EXPECT_LE(OmegaLowerBound(a2, p, n2), SolveTau(PowerLawSpectrum(p, a2), n2).omega);
    }
  }
  EXPECT_EQ(tau_cases, 30);
  EXPECT_EQ(omega_cases, 30);
}

}  // namespace
}  // namespace w2s
