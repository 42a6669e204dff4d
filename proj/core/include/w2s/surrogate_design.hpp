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

// Optimal surrogates, masks and the power-law cutoff/scaling predictions.

#ifndef W2S_SURROGATE_DESIGN_HPP_
#define W2S_SURROGATE_DESIGN_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "w2s/spectrum.hpp"

namespace w2s {

enum class SurrogateKind { kArbitrary, kGroundTruth, kOptimal, kMasked };

std::string_view SurrogateKindName(SurrogateKind kind);

struct SurrogateParam {
  Eigen::VectorXd values;
  SurrogateKind kind = SurrogateKind::kArbitrary;
  std::vector<int> support;  // 0-based, sorted; only for kMasked
};

struct GainProfile {
  Eigen::VectorXd gains;
  double threshold_amplify = 0.0;  // 1 - Omega
};

// Slack used to decide zeta_i^2 < 1 - Omega. A bisection tau never lands on
// an exact tie, so ties within this margin are treated as ties and excluded.
inline constexpr double kMaskTieTolerance = 1e-12;

GainProfile ComputeGainProfile(const SpectralStats& stats);
GainProfile ComputeGainProfile(const Spectrum& spectrum, int n);

SurrogateParam OptimalSurrogate(const Spectrum& spectrum, const Eigen::VectorXd& beta_star, int n);

// {i : zeta_i^2 < 1 - Omega}, 0-based.
std::vector<int> OptimalMask(const SpectralStats& stats);
std::vector<int> OptimalMask(const Spectrum& spectrum, int n);

SurrogateParam MaskedSurrogate(const Eigen::VectorXd& beta_star, std::vector<int> support);

// Exhaustive search over all 2^p supports of the one-stage risk of the masked
// ground truth. Risks within 1e-12 relative are ties; ties go to the smaller
// support, then the lexicographically smaller index list. Requires p <= 20
// (kTooLarge otherwise). `threads` <= 1 runs inline.
std::vector<int> BruteForceMask(const Spectrum& spectrum, const Eigen::VectorXd& beta_star, int n,
                                double sigma_sq, int threads = 1);

struct CutoffIndices {
  double i_gain = 0.0;  // n C1
  double i_mask = 0.0;  // n C2
};

double CutoffConstantGain(double alpha);
double CutoffConstantMask(double alpha);
CutoffIndices ComputeCutoffIndices(double alpha, int n);

// Exponent gamma in R = Theta(n^-gamma): beta_exp - 1 below 2 alpha + 1,
// 2 alpha above. The boundary itself is rejected.
double ScalingExponent(double alpha, double beta_exp);

// Window on n where a masked surrogate provably beats the standard target.
bool BenignRegionCheck(double alpha, int p, int n);

struct Window {
  double lower = 0.0;
  double upper = 0.0;
};
// Exposed for the CLI and tests; the check above is lower < n < upper.
Window BenignRegionWindow(double alpha, int p);

}  // namespace w2s

#endif  // W2S_SURROGATE_DESIGN_HPP_
