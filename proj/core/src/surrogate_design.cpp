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

#include "w2s/surrogate_design.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <thread>

#include "w2s/error.hpp"
#include "w2s/estimators.hpp"
#include "w2s/theory.hpp"

namespace w2s {
namespace {

void RequireAlpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidParameter, "alpha must be a finite value > 1");
  }
}

std::vector<int> MaskIndices(std::uint32_t bits) {
  std::vector<int> out;
  for (int i = 0; bits != 0; ++i, bits >>= 1) {
    if (bits & 1U) out.push_back(i);
  }
  return out;
}

struct Candidate {
  double risk = 0.0;
  std::uint32_t bits = 0;
};

// True if a should win over b.
bool Better(const Candidate& a, const Candidate& b) {
  const double scale = std::max(std::abs(a.risk), std::abs(b.risk));
  if (std::abs(a.risk - b.risk) > 1e-12 * scale) return a.risk < b.risk;
  const int ca = std::popcount(a.bits);
  const int cb = std::popcount(b.bits);
  if (ca != cb) return ca < cb;
  const std::vector<int> ia = MaskIndices(a.bits);
  const std::vector<int> ib = MaskIndices(b.bits);
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

}  // namespace

std::string_view SurrogateKindName(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::kArbitrary:
      return "arbitrary";
    case SurrogateKind::kGroundTruth:
      return "ground-truth";
    case SurrogateKind::kOptimal:
      return "optimal";
    case SurrogateKind::kMasked:
      return "masked";
  }
  return "unknown";
}

GainProfile ComputeGainProfile(const SpectralStats& stats) {
  const double om = stats.omega;
  GainProfile g;
  g.threshold_amplify = 1.0 - om;
  g.gains.resize(stats.zeta.size());
  for (Eigen::Index i = 0; i < stats.zeta.size(); ++i) {
    const double z = stats.zeta[i];
    const double keep = 1.0 - z;
    g.gains[i] = 1.0 / (keep + z * z * om / ((1.0 - om) * keep));
  }
  return g;
}

GainProfile ComputeGainProfile(const Spectrum& spectrum, int n) {
  return ComputeGainProfile(SolveTau(spectrum, n));
}

SurrogateParam OptimalSurrogate(const Spectrum& spectrum, const Eigen::VectorXd& beta_star, int n) {
  if (static_cast<std::size_t>(beta_star.size()) != spectrum.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "beta_star length != p");
  }
  const GainProfile g = ComputeGainProfile(spectrum, n);
  SurrogateParam s;
  s.kind = SurrogateKind::kOptimal;
  s.values = g.gains.cwiseProduct(beta_star);
  return s;
}

std::vector<int> OptimalMask(const SpectralStats& stats) {
  const double threshold = 1.0 - stats.omega;
  std::vector<int> support;
  for (Eigen::Index i = 0; i < stats.zeta.size(); ++i) {
    const double z = stats.zeta[i];
    if (threshold - z * z > kMaskTieTolerance) support.push_back(static_cast<int>(i));
  }
  return support;
}

std::vector<int> OptimalMask(const Spectrum& spectrum, int n) {
  return OptimalMask(SolveTau(spectrum, n));
}

SurrogateParam MaskedSurrogate(const Eigen::VectorXd& beta_star, std::vector<int> support) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  SurrogateParam s;
  s.kind = SurrogateKind::kMasked;
  s.values = ApplyMask(beta_star, support);
  s.support = std::move(support);
  return s;
}

std::vector<int> BruteForceMask(const Spectrum& spectrum, const Eigen::VectorXd& beta_star, int n,
                                double sigma_sq, int threads) {
  const int p = static_cast<int>(spectrum.size());
  if (p > 20) throw Error(ErrorCode::kTooLarge, "brute force limited to p <= 20");
  if (beta_star.size() != p) throw Error(ErrorCode::kDimensionMismatch, "beta_star length != p");
  const SpectralStats stats = SolveTau(spectrum, n);
  const std::uint32_t total = 1U << p;

  auto scan = [&](std::uint32_t begin, std::uint32_t end) {
    Candidate best{0.0, begin};
    bool have = false;
    Eigen::VectorXd masked(p);
    for (std::uint32_t bits = begin; bits < end; ++bits) {
      for (int i = 0; i < p; ++i) masked[i] = (bits >> i) & 1U ? beta_star[i] : 0.0;
      const Candidate c{OneStageRisk(stats, spectrum, beta_star, masked, sigma_sq).total, bits};
      if (!have || Better(c, best)) {
        best = c;
        have = true;
      }
    }
    return best;
  };

  const int workers = std::clamp(threads, 1, static_cast<int>(std::min<std::uint32_t>(total, 64)));
  std::vector<Candidate> partial(static_cast<std::size_t>(workers));
  const std::uint32_t chunk = (total + workers - 1) / workers;
  if (workers == 1) {
    partial[0] = scan(0, total);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const std::uint32_t b = std::min(total, w * chunk);
      const std::uint32_t e = std::min(total, b + chunk);
      pool.emplace_back([&, w, b, e] { partial[w] = b < e ? scan(b, e) : Candidate{1e308, 0}; });
    }
    for (auto& t : pool) t.join();
  }
  Candidate best = partial[0];
  for (std::size_t w = 1; w < partial.size(); ++w) {
    if (Better(partial[w], best)) best = partial[w];
  }
  return MaskIndices(best.bits);
}

double CutoffConstantGain(double alpha) {
  RequireAlpha(alpha);
  return alpha * std::sin(std::numbers::pi / alpha) /
         (std::numbers::pi * std::pow(alpha - 1.0, 1.0 / alpha));
}

double CutoffConstantMask(double alpha) {
  RequireAlpha(alpha);
  return alpha * std::sin(std::numbers::pi / alpha) /
         (std::numbers::pi * std::pow(std::sqrt(alpha) - 1.0, 1.0 / alpha));
}

CutoffIndices ComputeCutoffIndices(double alpha, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "n must be >= 1");
  return {n * CutoffConstantGain(alpha), n * CutoffConstantMask(alpha)};
}

double ScalingExponent(double alpha, double beta_exp) {
  RequireAlpha(alpha);
  if (!(beta_exp > 1.0) || !std::isfinite(beta_exp)) {
    throw Error(ErrorCode::kInvalidParameter, "beta_exp must be a finite value > 1");
  }
  const double edge = 2.0 * alpha + 1.0;
  if (std::abs(beta_exp - edge) <= 1e-12 * edge) {
    throw Error(ErrorCode::kInvalidParameter, "beta_exp = 2 alpha + 1 is excluded");
  }
  return beta_exp < edge ? beta_exp - 1.0 : 2.0 * alpha;
}

Window BenignRegionWindow(double alpha, int p) {
  RequireAlpha(alpha);
  const double a = alpha;
  const double am1 = a - 1.0;
  const double pp = p;
  Window w;
  w.lower = std::max(2.0 * a, pp * a / (am1 * am1) + a * a / (am1 * am1));
  const double e1 = (pp + 1.0) * (a - 2.0) / a;
  const double e2 = pp * TauBoundHypothesisRatio(a);
  // sqrt(2a/5) - 1 <= 0 for a <= 2.5; the pow is then NaN and the window empty.
  const double e3 = pp * std::numbers::pi * std::pow(std::sqrt(2.0 * a / 5.0) - 1.0, 1.0 / a) /
                        (a * std::sin(std::numbers::pi / a)) -
                    (pp + 1.0) / am1;
  w.upper = std::min({e1, e2, e3}) - 1.0;
  return w;
}

bool BenignRegionCheck(double alpha, int p, int n) {
  if (!(alpha > 4.0) || !std::isfinite(alpha) || p < 1) return false;
  const Window w = BenignRegionWindow(alpha, p);
  return w.lower < n && n < w.upper;
}

}  // namespace w2s
