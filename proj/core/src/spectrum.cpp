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
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "compensated_sum.hpp"
#include "w2s/error.hpp"

namespace w2s {
namespace {

void RequireAlpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidParameter,
                "alpha must be a finite value > 1, got " + std::to_string(alpha));
  }
}

// (alpha sin(pi/alpha) / pi)^alpha; the inverse of the asymptotic constant.
double InverseTauConstant(double alpha) {
  return std::pow(alpha * std::sin(std::numbers::pi / alpha) / std::numbers::pi, alpha);
}

double TailLength(double alpha, int p, int n) {
  return n + 1.0 + (p + 1.0) / (alpha - 1.0);
}

}  // namespace

Spectrum::Spectrum(Eigen::VectorXd eigenvalues) : values_(std::move(eigenvalues)) {
  if (values_.size() == 0) {
    throw Error(ErrorCode::kInvalidParameter, "spectrum must be non-empty");
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "eigenvalue " + std::to_string(i + 1) + " is not a positive finite number");
    }
    if (i > 0 && v > values_[i - 1]) {
      throw Error(ErrorCode::kInvalidParameter,
                  "eigenvalues must be non-increasing (index " + std::to_string(i + 1) + ")");
    }
  }
}

Spectrum::Spectrum(const std::vector<double>& eigenvalues)
    : Spectrum(Eigen::Map<const Eigen::VectorXd>(eigenvalues.data(),
                                                 static_cast<Eigen::Index>(eigenvalues.size()))) {}

Spectrum Spectrum::Scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorCode::kInvalidParameter, "scale must be positive");
  return Spectrum(Eigen::VectorXd(values_ * c));
}

Spectrum PowerLawSpectrum(int p, double alpha) {
  if (p < 1) throw Error(ErrorCode::kInvalidParameter, "p must be >= 1");
  RequireAlpha(alpha);
  Eigen::VectorXd v(p);
  for (int i = 0; i < p; ++i) v[i] = std::pow(static_cast<double>(i + 1), -alpha);
  return Spectrum(std::move(v));
}

Eigen::VectorXd PowerLawSignal(int p, double alpha, double beta_exp) {
  if (p < 1) throw Error(ErrorCode::kInvalidParameter, "p must be >= 1");
  RequireAlpha(alpha);
  if (!(beta_exp > 1.0) || !std::isfinite(beta_exp)) {
    throw Error(ErrorCode::kInvalidParameter, "beta_exp must be a finite value > 1");
  }
  Eigen::VectorXd beta(p);
  for (int i = 0; i < p; ++i) {
    beta[i] = std::sqrt(std::pow(static_cast<double>(i + 1), alpha - beta_exp));
  }
  return beta;
}

double EffectiveDegreesOfFreedom(const Spectrum& spectrum, double tau) {
  const Eigen::VectorXd& l = spectrum.values();
  return internal::SumTailFirst(l.size(), [&](long i) { return l[i] / (l[i] + tau); });
}

SpectralStats StatsAtTau(const Spectrum& spectrum, int n, double tau) {
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "n must be >= 1");
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidParameter, "tau must be positive");
  const Eigen::VectorXd& l = spectrum.values();
  SpectralStats s;
  s.tau = tau;
  s.n = n;
  s.zeta.resize(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) s.zeta[i] = tau / (l[i] + tau);
  // 1 - zeta is formed as lambda/(lambda+tau) to keep precision at the head.
  const double sq = internal::SumTailFirst(l.size(), [&](long i) {
    const double one_minus = l[i] / (l[i] + tau);
    return one_minus * one_minus;
  });
  s.omega = sq / n;
  return s;
}

SpectralStats SolveTau(const Spectrum& spectrum, int n, const FixedPointOptions& options) {
  const auto p = static_cast<long>(spectrum.size());
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "n must be >= 1");
  if (n >= p) {
    throw Error(ErrorCode::kNoSolution, "fixed point needs n < p (n=" + std::to_string(n) +
                                            ", p=" + std::to_string(p) + ")");
  }
  const double target = n;
  const double tol = options.atol + options.rtol * target;
  const double lambda_max = spectrum[0];
  const double lambda_min = spectrum[static_cast<std::size_t>(p - 1)];

  double lo = std::max(lambda_min * DBL_EPSILON, DBL_MIN);
  double hi = lambda_max * static_cast<double>(p) / target;
  const double f_lo = EffectiveDegreesOfFreedom(spectrum, lo);
  const double f_hi = EffectiveDegreesOfFreedom(spectrum, hi);
  if (!(f_lo >= target && f_hi <= target)) {
    throw Error(ErrorCode::kNonConvergence,
                "could not certify the fixed-point bracket (tail eigenvalues underflow?)");
  }

  double best = lo;
  double best_res = std::abs(f_lo - target);
  if (std::abs(f_hi - target) < best_res) {
    best = hi;
    best_res = std::abs(f_hi - target);
  }
  // Geometric midpoint: the bracket routinely spans 20+ decades.
  for (int it = 0; it < options.max_iterations && best_res > tol; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) break;
    const double f = EffectiveDegreesOfFreedom(spectrum, mid);
    const double res = std::abs(f - target);
    if (res < best_res) {
      best = mid;
      best_res = res;
    }
    if (f > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best_res > tol) {
    throw Error(ErrorCode::kNonConvergence,
                "fixed-point residual " + std::to_string(best_res) + " above tolerance " +
                    std::to_string(tol));
  }
  return StatsAtTau(spectrum, n, best);
}

double FixedPointResidual(const Spectrum& spectrum, const SpectralStats& stats) {
  return std::abs(EffectiveDegreesOfFreedom(spectrum, stats.tau) - stats.n);
}

double OmegaRatioForm(const SpectralStats& stats) {
  const Eigen::VectorXd& z = stats.zeta;
  const double num = internal::SumTailFirst(z.size(), [&](long i) {
    return (1.0 - z[i]) * (1.0 - z[i]);
  });
  const double den = internal::SumTailFirst(z.size(), [&](long i) { return 1.0 - z[i]; });
  return num / den;
}

double TauAsymptotic(double alpha, int n) {
  RequireAlpha(alpha);
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "n must be >= 1");
  return std::pow(static_cast<double>(n), -alpha) / InverseTauConstant(alpha);
}

double OmegaAsymptotic(double alpha) {
  RequireAlpha(alpha);
  return (alpha - 1.0) / alpha;
}

double TauBoundHypothesisRatio(double alpha) {
  return (3.0 + std::pow(2.0, -alpha)) / (4.0 + std::pow(2.0, -(alpha - 2.0)));
}

Interval TauBoundsNonAsymptotic(double alpha, int p, int n) {
  RequireAlpha(alpha);
  if (n < 1 || p < 1) throw Error(ErrorCode::kInvalidParameter, "n, p must be >= 1");
  const double k = TauBoundHypothesisRatio(alpha);
  if (!(n < p * k)) {
    throw Error(ErrorCode::kHypothesisViolated,
                "tau bounds need n < p*k (n=" + std::to_string(n) +
                    ", p*k=" + std::to_string(p * k) + ")");
  }
  const double c = InverseTauConstant(alpha);
  // c n^a <= 1/tau <= c (n + 1 + (p+1)/(a-1))^a
  Interval out;
  out.lower = 1.0 / (c * std::pow(TailLength(alpha, p, n), alpha));
  out.upper = 1.0 / (c * std::pow(static_cast<double>(n), alpha));
  return out;
}

bool OmegaBoundHypothesisHolds(double alpha, int p, int n) {
  if (!(alpha > 1.0) || p < 1 || n < 1) return false;
  const double am1 = alpha - 1.0;
  const double k1 = alpha / (am1 * am1);
  const double k2 = TauBoundHypothesisRatio(alpha);
  return p * k1 + alpha * alpha / (am1 * am1) < n && n < p * k2;
}

double OmegaLowerBound(double alpha, int p, int n) {
  RequireAlpha(alpha);
  if (!OmegaBoundHypothesisHolds(alpha, p, n)) {
    throw Error(ErrorCode::kHypothesisViolated,
                "omega bound needs p*k1 + a^2/(a-1)^2 < n < p*k2 (n=" + std::to_string(n) +
                    ", p=" + std::to_string(p) + ")");
  }
  const double ratio = TailLength(alpha, p, n) / (p + 1.0);
  return (alpha - 1.0) / alpha - std::pow(ratio, 2.0 * alpha - 1.0) / alpha - 1.0 / n;
}

}  // namespace w2s
