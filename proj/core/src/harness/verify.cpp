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

#include "w2s/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <random>

#include "json.hpp"
#include "w2s/dense_reference.hpp"
#include "w2s/error.hpp"
#include "w2s/estimators.hpp"
#include "w2s/harness/experiments.hpp"
#include "w2s/harness/monte_carlo.hpp"
#include "w2s/seeding.hpp"
#include "w2s/spectrum.hpp"
#include "w2s/surrogate_design.hpp"
#include "w2s/theory.hpp"

namespace w2s::harness {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Check {
  double observed = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

double RelDiff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& o) : opt_(o), rng_(DeriveSeed(o.seed, 0x7e51f1, 0)) {}

  // Random positive spectrum with a spread of a few decades.
  Spectrum RandomSpectrum(int p) {
    std::uniform_real_distribution<double> u(-3.0, 0.0);
    std::vector<double> v(static_cast<std::size_t>(p));
    for (double& x : v) x = std::pow(10.0, u(rng_));
    std::sort(v.begin(), v.end(), std::greater<>());
    return Spectrum(v);
  }
  VectorXd RandomVector(int p, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    VectorXd v(p);
    for (int i = 0; i < p; ++i) v[i] = g(rng_);
    return v;
  }
  int UniformInt(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double Uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  SpectralStats Solve(const Spectrum& s, int n) {
    SpectralStats st = SolveTau(s, n);
    if (opt_.inject_tau_fault) st = StatsAtTau(s, n, st.tau * (1.0 + 1e-3));
    return st;
  }

  const VerifyOptions& options() const { return opt_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  VerifyOptions opt_;
  std::mt19937_64 rng_;
};

void Add(std::vector<PropertyResult>& out, std::string name, const std::function<Check()>& fn) {
  PropertyResult r;
  r.name = std::move(name);
  try {
    const Check c = fn();
    r.observed = c.observed;
    r.tolerance = c.tolerance;
    r.margin = c.tolerance - c.observed;
    r.passed = c.observed <= c.tolerance;
    r.detail = c.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.observed = std::numeric_limits<double>::infinity();
    r.margin = -std::numeric_limits<double>::infinity();
    r.detail = std::string("exception: ") + e.what();
  }
  out.push_back(std::move(r));
}

}  // namespace

std::vector<PropertyResult> RunVerify(const VerifyOptions& options) {
  Suite s(options);
  std::vector<PropertyResult> out;

  Add(out, "spectrum.fixed_point_residual", [&] {
    double worst = 0.0;
    std::vector<std::pair<Spectrum, int>> cases;
    for (double a : {1.5, 2.0, 4.0}) {
      for (int n : {10, 100, 500}) cases.emplace_back(PowerLawSpectrum(1000, a), n);
    }
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(5, 200);
      cases.emplace_back(s.RandomSpectrum(p), s.UniformInt(1, p - 1));
    }
    for (const auto& [spec, n] : cases) {
      const SpectralStats st = s.Solve(spec, n);
      worst = std::max(worst, FixedPointResidual(spec, st) / (1e-12 + 1e-12 * n));
    }
    return Check{worst, 1.0, "residual / (atol + rtol n), worst over " +
                                 std::to_string(cases.size()) + " instances"};
  });

  Add(out, "spectrum.fixed_point_bit_identical", [&] {
    const Spectrum spec = s.RandomSpectrum(300);
    const double a = SolveTau(spec, 77).tau;
    double mismatches = 0;
    for (int k = 0; k < 5; ++k) mismatches += SolveTau(spec, 77).tau != a;
    return Check{mismatches, 0.0, "repeated solves differing from the first"};
  });

  Add(out, "spectrum.zeta_ordering", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(3, 300);
      const Spectrum spec = s.RandomSpectrum(p);
      const SpectralStats st = s.Solve(spec, s.UniformInt(1, p - 1));
      for (int i = 0; i < p; ++i) {
        if (i > 0 && st.zeta[i] < st.zeta[i - 1]) worst = std::max(worst, 1.0);
        const double keep = spec[static_cast<std::size_t>(i)] / (spec[static_cast<std::size_t>(i)] + st.tau);
        worst = std::max(worst, std::abs((1.0 - st.zeta[i]) - keep));
      }
    }
    return Check{worst, 1e-14, "ordering violations count as 1; else max |1-zeta - lambda/(lambda+tau)|"};
  });

  Add(out, "spectrum.omega_ratio_identity", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(3, 400);
      const SpectralStats st = s.Solve(s.RandomSpectrum(p), s.UniformInt(1, p - 1));
      worst = std::max(worst, RelDiff(st.omega, OmegaRatioForm(st)));
    }
    return Check{worst, 1e-10, "relative gap between (1/n) sum (1-zeta)^2 and the ratio form"};
  });

  Add(out, "spectrum.scale_covariance", [&] {
    double worst = 0.0;
    const Spectrum spec = s.RandomSpectrum(120);
    const SpectralStats base = SolveTau(spec, 40);
    for (double c : {1e-3, 7.0, 1e3}) {
      const SpectralStats st = SolveTau(spec.Scaled(c), 40);
      worst = std::max({worst, RelDiff(st.tau, c * base.tau), RelDiff(st.omega, base.omega),
                        (st.zeta - base.zeta).cwiseAbs().maxCoeff()});
    }
    return Check{worst, 1e-9, "tau(c Sigma) vs c tau(Sigma); zeta and Omega unchanged"};
  });

  Add(out, "spectrum.nonasymptotic_bounds", [&] {
    int violations = 0, tested = 0;
    for (int k = 0; k < 30; ++k) {
      const double a = s.Uniform(1.2, 8.0);
      const int p = s.UniformInt(200, 5000);
      const int nmax = static_cast<int>(std::ceil(p * TauBoundHypothesisRatio(a))) - 1;
      const int n = s.UniformInt(1, std::max(1, nmax));
      if (!(n < p * TauBoundHypothesisRatio(a))) continue;
      const Interval iv = TauBoundsNonAsymptotic(a, p, n);
      const double tau = s.Solve(PowerLawSpectrum(p, a), n).tau;
      violations += !iv.Contains(tau);
      ++tested;
    }
    for (int k = 0; k < 30; ++k) {
      const double a = s.Uniform(4.2, 8.0);
      const int p = s.UniformInt(500, 5000);
      const double am1 = a - 1.0;
      const int lo = static_cast<int>(std::floor(p * a / (am1 * am1) + a * a / (am1 * am1))) + 1;
      const int hi = static_cast<int>(std::ceil(p * TauBoundHypothesisRatio(a))) - 1;
      if (lo > hi) continue;
      const int n = s.UniformInt(lo, hi);
      if (!OmegaBoundHypothesisHolds(a, p, n)) continue;
      violations += !(OmegaLowerBound(a, p, n) <= s.Solve(PowerLawSpectrum(p, a), n).omega);
      ++tested;
    }
    return Check{static_cast<double>(violations), 0.0,
                 std::to_string(tested) + " hypothesis-satisfying points"};
  });

  Add(out, "estimators.min_norm_interpolation", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(20, 120);
      const int n = s.UniformInt(2, p - 1);
      const Spectrum spec = s.RandomSpectrum(p);
      const Dataset d = SampleDataset(spec, s.RandomVector(p), 0.3, n, DeriveSeed(options.seed, 11, k));
      const EstimatorOutput e = Fit(d.design, d.labels);
      worst = std::max(worst, (d.design * e.beta_hat - d.labels).norm() / d.labels.norm());
    }
    return Check{worst, 1e-8, "||X beta_hat - y|| / ||y||"};
  });

  Add(out, "estimators.min_norm_minimality", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(10, 40);
      const int n = s.UniformInt(2, p - 2);
      const Dataset d = SampleDataset(s.RandomSpectrum(p), s.RandomVector(p), 0.1, n,
                                      DeriveSeed(options.seed, 12, k));
      const PseudoInverseSolver solver(d.design);
      const VectorXd b = solver.Solve(d.labels).beta_hat;
      const MatrixXd null = solver.NullSpaceBasis();
      worst = std::max(worst, (null.transpose() * b).cwiseAbs().maxCoeff() / b.norm());
      for (int j = 0; j < 20; ++j) {
        const VectorXd v = null * s.RandomVector(static_cast<int>(null.cols()), 0.1);
        worst = std::max(worst, (b.squaredNorm() - (b + v).squaredNorm()) / b.squaredNorm());
      }
    }
    return Check{worst, 1e-10, "null-space component of beta_hat and norm gain under perturbation"};
  });

  Add(out, "estimators.least_squares_normal_equations", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(2, 30);
      const int n = s.UniformInt(p + 1, 3 * p + 5);
      const Dataset d = SampleDataset(s.RandomSpectrum(p), s.RandomVector(p), 1.0, n,
                                      DeriveSeed(options.seed, 13, k));
      const EstimatorOutput e = Fit(d.design, d.labels);
      const double g = (d.design.transpose() * (d.design * e.beta_hat - d.labels)).norm();
      worst = std::max(worst, g / (d.design.norm() * d.labels.norm()));
      if (e.regime != Regime::kOrdinaryLeastSquares) worst = 1.0;
    }
    return Check{worst, 1e-10, "||X^T (X beta - y)|| / (||X|| ||y||)"};
  });

  Add(out, "estimators.sampling_determinism", [&] {
    const Spectrum spec = s.RandomSpectrum(50);
    const VectorXd b = s.RandomVector(50);
    const Dataset a = SampleDataset(spec, b, 0.5, 30, 42);
    const Dataset c = SampleDataset(spec, b, 0.5, 30, 42);
    const bool same = a.design == c.design && a.labels == c.labels;
    return Check{same ? 0.0 : 1.0, 0.0, "same seed yields identical datasets"};
  });

  Add(out, "theory.one_stage_diagonal_vs_dense", [&] {
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const int p = s.UniformInt(4, 50);
      const int n = s.UniformInt(1, p - 1);
      const Spectrum spec = s.RandomSpectrum(p);
      const VectorXd bstar = s.RandomVector(p), bs = s.RandomVector(p);
      const double sig = s.Uniform(0.0, 1.0);
      const MatrixXd u = dense::RandomOrthogonal(p, DeriveSeed(options.seed, 14, k));
      const RiskReport a = OneStageRisk(spec, bstar, bs, n, sig);
      const RiskReport b = dense::OneStageRisk(dense::Compose(u, spec.values()), u * bstar, u * bs, n, sig);
      worst = std::max({worst, RelDiff(a.total, b.total), RelDiff(a.bias, b.bias),
                        RelDiff(a.variance, b.variance)});
    }
    return Check{worst, 1e-10, "relative gap, rotated dense resolvent form"};
  });

  Add(out, "theory.two_stage_diagonal_vs_dense", [&] {
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const int p = s.UniformInt(4, 50);
      const Spectrum st = s.RandomSpectrum(p), ss = s.RandomSpectrum(p);
      const VectorXd bstar = s.RandomVector(p);
      const int n = s.UniformInt(1, p - 1), m = s.UniformInt(1, p - 1);
      const double sig_t = s.Uniform(0, 1), sig_s = s.Uniform(0, 1);
      const MatrixXd u = dense::RandomOrthogonal(p, DeriveSeed(options.seed, 15, k));
      const TwoStageTerms a = TwoStageRiskTerms(ProblemInstance{st, ss, bstar, sig_t, sig_s, n, m});
      const TwoStageTerms b = dense::TwoStageRiskTerms(dense::Compose(u, st.values()),
                                                       dense::Compose(u, ss.values()), u * bstar,
                                                       sig_t, sig_s, n, m);
      worst = std::max({worst, RelDiff(a.term1, b.term1), RelDiff(a.term2, b.term2),
                        RelDiff(a.term3, b.term3), RelDiff(a.gamma_s_sq, b.gamma_s_sq),
                        RelDiff(a.expected_gamma_t_sq, b.expected_gamma_t_sq)});
    }
    return Check{worst, 1e-10, "relative gap per term, shared rotated eigenbasis"};
  });

  Add(out, "theory.omniscient_consistency", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(3, 200);
      const Spectrum spec = s.RandomSpectrum(p);
      const SpectralStats st = SolveTau(spec, s.UniformInt(1, p - 1));
      const VectorXd b = s.RandomVector(p);
      const double sig = s.Uniform(0, 2);
      worst = std::max(worst, RelDiff(OmniscientRisk(st, spec, b, sig).total,
                                      OneStageRisk(st, spec, b, b, sig).total));
    }
    return Check{worst, 1e-12, "omniscient vs one-stage with beta_s = beta_star"};
  });

  Add(out, "theory.gamma_implicit_residual", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int p = s.UniformInt(3, 200);
      const Spectrum spec = s.RandomSpectrum(p);
      const SpectralStats st = SolveTau(spec, s.UniformInt(1, p - 1));
      const VectorXd b = s.RandomVector(p);
      const double sig = s.Uniform(0, 2);
      const double g = GammaTSq(st, spec, b, sig);
      // gamma^2 = kappa (sigma^2 + R(b, b)), R(b, b) = sum lambda zeta^2 b^2 + Omega gamma^2 / kappa
      double shrunk = 0.0;
      for (int i = 0; i < p; ++i) {
        shrunk += spec[static_cast<std::size_t>(i)] * st.zeta[i] * st.zeta[i] * b[i] * b[i];
      }
      const double rhs = st.kappa() * (sig + shrunk + st.omega * g / st.kappa());
      worst = std::max(worst, RelDiff(g, rhs));
      if (g < st.kappa() * sig) worst = 1.0;
    }
    return Check{worst, 1e-10, "relative residual of the implicit gamma equation"};
  });

  Add(out, "theory.noise_monotonicity_and_positivity", [&] {
    int bad = 0;
    for (int k = 0; k < 20; ++k) {
      const int p = s.UniformInt(3, 100);
      const Spectrum spec = s.RandomSpectrum(p);
      const SpectralStats st = SolveTau(spec, s.UniformInt(1, p - 1));
      const VectorXd bstar = s.RandomVector(p), bs = s.RandomVector(p);
      double prev = -1.0;
      for (double sig : {0.0, 0.1, 0.5, 1.0, 3.0}) {
        const RiskReport r = OneStageRisk(st, spec, bstar, bs, sig);
        bad += !(r.total > prev) + !(r.bias >= 0.0) + !(r.variance > 0.0);
        prev = r.total;
      }
    }
    return Check{static_cast<double>(bad), 0.0, "strict increase in sigma^2, bias >= 0, variance > 0"};
  });

  Add(out, "theory.isotropy_degeneracy", [&] {
    int bad = 0;
    for (int k = 0; k < 5; ++k) {
      const int p = s.UniformInt(5, 60);
      const Spectrum spec(std::vector<double>(static_cast<std::size_t>(p), s.Uniform(0.1, 3.0)));
      const int n = s.UniformInt(1, p - 1);
      const SpectralStats st = SolveTau(spec, n);
      const VectorXd b = s.RandomVector(p);
      const double best = OneStageRisk(st, spec, b, b, 0.2).total;
      for (int j = 0; j < 200; ++j) {
        bad += !(OneStageRisk(st, spec, b, b + s.RandomVector(p, 1e-3), 0.2).total > best);
      }
    }
    return Check{static_cast<double>(bad), 0.0, "perturbations of beta_star that do not increase risk"};
  });

  Add(out, "design.gain_threshold_sign", [&] {
    int bad = 0;
    for (int k = 0; k < 20; ++k) {
      const int p = s.UniformInt(3, 300);
      const SpectralStats st = SolveTau(s.RandomSpectrum(p), s.UniformInt(1, p - 1));
      const GainProfile g = ComputeGainProfile(st);
      for (int i = 0; i < p; ++i) {
        const double side = (1.0 - st.zeta[i]) - st.omega;
        if (std::abs(side) < 1e-12) continue;
        bad += (g.gains[i] > 1.0) != (side > 0.0);
      }
    }
    return Check{static_cast<double>(bad), 0.0, "sign(gain - 1) vs sign((1 - zeta) - Omega)"};
  });

  Add(out, "design.optimal_surrogate_dominance", [&] {
    int bad = 0;
    for (int k = 0; k < 5; ++k) {
      const int p = s.UniformInt(5, 40);
      const Spectrum spec = s.RandomSpectrum(p);
      const int n = s.UniformInt(1, p - 1);
      const SpectralStats st = SolveTau(spec, n);
      const VectorXd b = s.RandomVector(p);
      const VectorXd opt = OptimalSurrogate(spec, b, n).values;
      const double r_opt = OneStageRisk(st, spec, b, opt, 0.3).total;
      bad += !(r_opt < OneStageRisk(st, spec, b, b, 0.3).total);
      for (int j = 0; j < 1000; ++j) {
        const VectorXd cand = opt + s.RandomVector(p, j % 2 ? 1e-2 : 1.0);
        bad += OneStageRisk(st, spec, b, cand, 0.3).total < r_opt * (1.0 - 1e-12);
      }
    }
    return Check{static_cast<double>(bad), 0.0, "random surrogates beating the optimum"};
  });

  Add(out, "design.risk_ordering_chain", [&] {
    int bad = 0;
    for (double a : {1.5, 2.0, 3.0}) {
      const Spectrum spec = PowerLawSpectrum(400, a);
      const VectorXd b = PowerLawSignal(400, a, 1.5);
      for (int n : {20, 80, 200}) {
        const SpectralStats st = SolveTau(spec, n);
        const double r_opt = OneStageRisk(st, spec, b, ComputeGainProfile(st).gains.cwiseProduct(b), 0.05).total;
        const double r_mask = OneStageRisk(st, spec, b, ApplyMask(b, OptimalMask(st)), 0.05).total;
        const double r_gt = OneStageRisk(st, spec, b, b, 0.05).total;
        bad += !(r_opt <= r_mask) + !(r_mask <= r_gt);
      }
    }
    return Check{static_cast<double>(bad), 0.0, "optimal <= mask <= ground truth"};
  });

  Add(out, "design.mask_bruteforce_equivalence", [&] {
    int bad = 0;
    for (int k = 0; k < 10; ++k) {
      const int p = 10;
      const Spectrum spec = s.RandomSpectrum(p);
      const VectorXd b = s.RandomVector(p);
      const int n = s.UniformInt(2, 8);
      const std::vector<int> rule = OptimalMask(spec, n);
      for (double sig : {0.0, 1.0}) bad += BruteForceMask(spec, b, n, sig, options.threads) != rule;
    }
    return Check{static_cast<double>(bad), 0.0, "threshold rule vs exhaustive search, p = 10"};
  });

  Add(out, "design.mask_sparsity_monotone", [&] {
    int bad = 0;
    for (double a : {1.5, 2.5, 4.0}) {
      const Spectrum spec = PowerLawSpectrum(500, a);
      std::size_t prev = 0;
      for (int n = 5; n < 500; n += 15) {
        const std::size_t c = OptimalMask(spec, n).size();
        bad += c < prev;
        prev = c;
      }
    }
    return Check{static_cast<double>(bad), 0.0, "mask size decreasing in n"};
  });

  Add(out, "theory.covariance_shift_map", [&] {
    const Spectrum t = s.RandomSpectrum(30);
    const VectorXd b = s.RandomVector(30);
    const double a = (CovarianceShiftMap(b, t.Scaled(4.0), t) - 2.0 * b).cwiseAbs().maxCoeff();
    const double c = (CovarianceShiftMap(b, t, t) - b).cwiseAbs().maxCoeff();
    return Check{std::max(a, c), 1e-14, "scalar and identity cases"};
  });

  Add(out, "theory.spectral_coordinates_roundtrip", [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const int p = s.UniformInt(2, 40);
      const Spectrum spec = s.RandomSpectrum(p);
      const MatrixXd u = dense::RandomOrthogonal(p, DeriveSeed(options.seed, 16, k));
      const MatrixXd cov = dense::Compose(u, spec.values());
      const VectorXd b = s.RandomVector(p), bh = s.RandomVector(p);
      const SpectralCoordinates sc = ToSpectralCoordinates(cov, b);
      worst = std::max(worst, (sc.spectrum.values() - spec.values()).cwiseAbs().maxCoeff() / spec[0]);
      // Excess risk is basis-free.
      const double direct = (bh - b).dot(cov * (bh - b));
      const double rotated = EmpiricalExcessRisk(sc.basis.transpose() * bh, sc.beta_bar, sc.spectrum);
      worst = std::max(worst, RelDiff(direct, rotated));
    }
    return Check{worst, 1e-8, "eigenvalue recovery and excess-risk invariance"};
  });

  Add(out, "harness.determinism_under_parallelism", [&] {
    const Spectrum spec = PowerLawSpectrum(120, 2.0);
    const VectorXd b = PowerLawSignal(120, 2.0, 1.5);
    const std::vector<VectorXd> kinds = {b, 0.5 * b};
    const OneStageMcResult one = OneStageMonteCarlo(spec, b, kinds, 40, 0.05, 24, options.seed, 1);
    const OneStageMcResult many = OneStageMonteCarlo(spec, b, kinds, 40, 0.05, 24, options.seed, 4);
    ProblemInstance inst{spec, spec, b, 0.05, 0.05, 30, 40};
    const McSummary t1 = TwoStageMonteCarlo(inst, 12, options.seed, 1);
    const McSummary t4 = TwoStageMonteCarlo(inst, 12, options.seed, 3);
    const bool same = one.risks == many.risks && t1.mean == t4.mean && t1.se == t4.se;
    return Check{same ? 0.0 : 1.0, 0.0, "1 vs 3-4 worker threads, bitwise"};
  });

  Add(out, "estimators.simulation_unbiased", [&] {
    const int p = 400, n = 160;
    const Spectrum spec = PowerLawSpectrum(p, 2.0);
    const VectorXd b = PowerLawSignal(p, 2.0, 1.5);
    const OneStageMcResult mc =
        OneStageMonteCarlo(spec, b, {b}, n, 0.05, 200, DeriveSeed(options.seed, 17, 0), options.threads);
    const double th = OmniscientRisk(spec, b, 0.05, n).total;
    const McSummary& m = mc.per_kind[0];
    return Check{std::abs(m.mean - th) / m.se, 3.0,
                 "|mc - theory| / se, standard target model, p=400 n=160, 200 trials"};
  });

  return out;
}

std::string VerifyReportJson(const std::vector<PropertyResult>& results,
                             const ExperimentConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["schema"] = "w2s-lab/verify/1";
  doc["build"] = BuildId();
  doc["seed"] = cfg.seed;
  doc["inject_fault"] = cfg.inject_fault;
  int failed = 0;
  nlohmann::ordered_json props = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    failed += !r.passed;
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["observed"] = std::isfinite(r.observed) ? nlohmann::ordered_json(r.observed) : nullptr;
    j["tolerance"] = r.tolerance;
    j["margin"] = std::isfinite(r.margin) ? nlohmann::ordered_json(r.margin) : nullptr;
    j["detail"] = r.detail;
    props.push_back(std::move(j));
  }
  doc["total"] = results.size();
  doc["failed"] = failed;
  doc["properties"] = std::move(props);
  return doc.dump(2) + "\n";
}

}  // namespace w2s::harness
