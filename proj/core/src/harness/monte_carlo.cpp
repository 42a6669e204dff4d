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

#include "w2s/harness/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "w2s/error.hpp"
#include "w2s/seeding.hpp"

namespace w2s::harness {
namespace {

constexpr std::uint64_t kStageTarget = 2;
constexpr std::uint64_t kStagePipeline = 3;
constexpr std::uint64_t kStageShift = 4;

}  // namespace

McSummary Summarize(const std::vector<double>& samples) {
  McSummary s;
  s.trials = static_cast<int>(samples.size());
  if (samples.empty()) {
    s.mean = s.se = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  // Two-pass, in index order: the result is independent of scheduling.
  double sum = 0.0;
  for (double x : samples) sum += x;
  s.mean = sum / s.trials;
  if (s.trials < 2) {
    s.se = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double x : samples) ss += (x - s.mean) * (x - s.mean);
  s.se = std::sqrt(ss / (s.trials - 1) / s.trials);
  return s;
}

double PairedStandardError(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd d = a - b;
  return Summarize(std::vector<double>(d.data(), d.data() + d.size())).se;
}

void ParallelTrials(int trials, int threads, const std::function<void(int)>& body) {
  if (trials <= 0) return;
  const int workers = std::clamp(threads, 1, trials);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
      try {
        body(t);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

OneStageMcResult OneStageMonteCarlo(const Spectrum& spectrum, const Eigen::VectorXd& beta_star,
                                    const std::vector<Eigen::VectorXd>& surrogates, int n,
                                    double sigma_sq, int trials, std::uint64_t point_seed,
                                    int threads, bool noiseless) {
  const auto p = static_cast<Eigen::Index>(spectrum.size());
  if (beta_star.size() != p) throw Error(ErrorCode::kDimensionMismatch, "beta_star length != p");
  for (const auto& s : surrogates) {
    if (s.size() != p) throw Error(ErrorCode::kDimensionMismatch, "surrogate length != p");
  }
  const auto kinds = static_cast<Eigen::Index>(surrogates.size());
  OneStageMcResult out;
  out.risks.resize(trials, kinds);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
  const double noise = noiseless ? 0.0 : sigma_sq;
  ParallelTrials(trials, threads, [&](int t) {
    // Labels of the zero model are pure noise; add X beta_s per surrogate.
    const Dataset d = SampleDataset(spectrum, zero, noise, n, DeriveSeed(point_seed, kStageTarget, t));
    const PseudoInverseSolver solver(d.design);
    for (Eigen::Index k = 0; k < kinds; ++k) {
      const Eigen::VectorXd y = d.design * surrogates[k] + d.labels;
      out.risks(t, k) = EmpiricalExcessRisk(solver.Solve(y).beta_hat, beta_star, spectrum);
    }
  });
  for (Eigen::Index k = 0; k < kinds; ++k) {
    const Eigen::VectorXd col = out.risks.col(k);
    out.per_kind.push_back(Summarize(std::vector<double>(col.data(), col.data() + col.size())));
  }
  return out;
}

McSummary TwoStageMonteCarlo(const ProblemInstance& inst, int trials, std::uint64_t point_seed,
                             int threads, const TwoStageOptions& options) {
  inst.Validate();
  std::vector<double> risks(static_cast<std::size_t>(trials));
  ParallelTrials(trials, threads, [&](int t) {
    const TwoStageOutput o = TwoStageFit(inst, DeriveSeed(point_seed, kStagePipeline, t), options);
    risks[static_cast<std::size_t>(t)] = EmpiricalExcessRisk(o.beta_s2t, inst.beta_star, inst.spectrum_t);
  });
  return Summarize(risks);
}

McSummary CovarianceShiftMonteCarlo(const Spectrum& spectrum_s, const Spectrum& spectrum_t,
                                    const Eigen::VectorXd& beta_star, double sigma_sq, int n,
                                    int trials, std::uint64_t point_seed, int threads) {
  if (spectrum_s.size() != spectrum_t.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "spectra differ in length");
  }
  std::vector<double> risks(static_cast<std::size_t>(trials));
  ParallelTrials(trials, threads, [&](int t) {
    const Dataset d =
        SampleDataset(spectrum_s, beta_star, sigma_sq, n, DeriveSeed(point_seed, kStageShift, t));
    risks[static_cast<std::size_t>(t)] =
        EmpiricalExcessRisk(Fit(d.design, d.labels).beta_hat, beta_star, spectrum_t);
  });
  return Summarize(risks);
}

McSummary ModelShiftMonteCarlo(const Spectrum& spectrum_t, const Eigen::VectorXd& beta_s,
                               const Eigen::VectorXd& beta_star, double sigma_sq, int n,
                               int trials, std::uint64_t point_seed, int threads) {
  std::vector<double> risks(static_cast<std::size_t>(trials));
  ParallelTrials(trials, threads, [&](int t) {
    const Dataset d =
        SampleDataset(spectrum_t, beta_s, sigma_sq, n, DeriveSeed(point_seed, kStageTarget, t));
    risks[static_cast<std::size_t>(t)] =
        EmpiricalExcessRisk(Fit(d.design, d.labels).beta_hat, beta_star, spectrum_t);
  });
  return Summarize(risks);
}

}  // namespace w2s::harness
