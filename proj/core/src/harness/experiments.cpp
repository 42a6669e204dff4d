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

#include "w2s/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "w2s/harness/monte_carlo.hpp"
#include "w2s/seeding.hpp"
#include "w2s/spectrum.hpp"
#include "w2s/surrogate_design.hpp"
#include "w2s/theory.hpp"

#ifndef W2S_BUILD_ID
#define W2S_BUILD_ID "unknown"
#endif

namespace w2s::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Cell Int(long long v) { return Cell(static_cast<std::int64_t>(v)); }
Cell Num(double v) { return std::isnan(v) ? Cell() : Cell(v); }
Cell Str(std::string_view s) { return Cell(std::string(s)); }

std::string Fmt(double x) { return FormatDouble(x); }

// Point seed for a grid cell; tags keep experiments on disjoint streams.
std::uint64_t PointSeed(const ExperimentConfig& cfg, std::uint64_t a, std::uint64_t b) {
  return DeriveSeed(DeriveSeed(cfg.seed, static_cast<std::uint64_t>(cfg.experiment) + 1, a), 0, b);
}

int SignChanges(const Eigen::VectorXd& gains) {
  int changes = 0;
  for (Eigen::Index i = 1; i < gains.size(); ++i) {
    if ((gains[i] > 1.0) != (gains[i - 1] > 1.0)) ++changes;
  }
  return changes;
}

}  // namespace

const char* BuildId() { return W2S_BUILD_ID; }

void AddStandardMetadata(const ExperimentConfig& cfg, Table& table) {
  table.AddMeta("experiment", std::string(ExperimentName(cfg.experiment)));
  table.AddMeta("build", BuildId());
  for (const auto& s : cfg.echo) {
    // Execution-only settings stay out so output bytes do not depend on them.
    if (s.key == "threads" || s.key == "force" || s.key == "json") continue;
    table.AddMeta("config." + s.key, s.raw + "  [" + s.origin + "]");
  }
  table.AddMeta("resolved.p", std::to_string(cfg.p));
  table.AddMeta("resolved.beta_exp", Fmt(cfg.beta_exp));
  table.AddMeta("resolved.sigma_t_sq", Fmt(cfg.sigma_t_sq));
  table.AddMeta("resolved.sigma_s_sq", Fmt(cfg.sigma_s_sq));
  table.AddMeta("resolved.trials", std::to_string(cfg.trials));
  table.AddMeta("resolved.seed", std::to_string(cfg.seed));
  table.AddMeta("note", "noise variances and trial counts are lab defaults unless set above");
}

double LeastSquaresSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

ExperimentResult RunGainProfile(const ExperimentConfig& cfg) {
  ExperimentResult r;
  Table& t = r.table;
  t.columns = {"alpha", "n", "i", "lambda", "zeta", "beta_star", "beta_opt", "gain",
               "amplified", "masked", "threshold_gain", "threshold_mask"};
  AddStandardMetadata(cfg, t);
  for (double alpha : cfg.alpha_grid) {
    const Spectrum spec = PowerLawSpectrum(cfg.p, alpha);
    const Eigen::VectorXd beta = PowerLawSignal(cfg.p, alpha, cfg.beta_exp);
    for (int n : cfg.n_grid) {
      const SpectralStats st = SolveTau(spec, n);
      const GainProfile g = ComputeGainProfile(st);
      const std::vector<int> mask = OptimalMask(st);
      std::vector<char> in_mask(static_cast<std::size_t>(cfg.p), 0);
      for (int i : mask) in_mask[static_cast<std::size_t>(i)] = 1;
      const double thr_mask = std::sqrt(1.0 - st.omega);
      int last_amplified = 0;
      for (int i = 0; i < cfg.p; ++i) {
        const bool amp = g.gains[i] > 1.0;
        if (amp) last_amplified = i + 1;
        t.AddRow({Num(alpha), Int(n), Int(i + 1), Num(spec[static_cast<std::size_t>(i)]),
                  Num(st.zeta[i]), Num(beta[i]), Num(g.gains[i] * beta[i]), Num(g.gains[i]),
                  Int(amp), Int(in_mask[static_cast<std::size_t>(i)]), Num(g.threshold_amplify),
                  Num(thr_mask)});
      }
      const CutoffIndices c = ComputeCutoffIndices(alpha, n);
      const std::string tag = "alpha=" + Fmt(alpha) + ",n=" + std::to_string(n);
      t.AddMeta("summary[" + tag + "]",
                "sign_changes=" + std::to_string(SignChanges(g.gains)) +
                    " last_amplified=" + std::to_string(last_amplified) +
                    " mask_size=" + std::to_string(mask.size()) + " nC1=" + Fmt(c.i_gain) +
                    " nC2=" + Fmt(c.i_mask));
      r.summary.push_back(tag + ": gain crosses 1 " + std::to_string(SignChanges(g.gains)) +
                          " time(s); last amplified index " + std::to_string(last_amplified) +
                          " (nC1=" + Fmt(c.i_gain) + "); mask keeps " +
                          std::to_string(mask.size()) + " (nC2=" + Fmt(c.i_mask) + ")");
    }
  }
  return r;
}

namespace {

const std::vector<std::string> kRiskColumns = {
    "experiment", "alpha",       "beta_exp",    "p",               "n",
    "m",          "kind",        "source",      "sigma_t_sq",      "sigma_s_sq",
    "theory_total", "theory_bias", "theory_variance", "mc_mean",   "mc_se",
    "trials",     "seed"};

}  // namespace

ExperimentResult RunRiskVsN(const ExperimentConfig& cfg) {
  ExperimentResult r;
  Table& t = r.table;
  t.columns = kRiskColumns;
  AddStandardMetadata(cfg, t);
  const std::string exp(ExperimentName(cfg.experiment));
  for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
    const double alpha = cfg.alpha_grid[ai];
    const Spectrum spec = PowerLawSpectrum(cfg.p, alpha);
    const Eigen::VectorXd beta = PowerLawSignal(cfg.p, alpha, cfg.beta_exp);
    for (int n : cfg.n_grid) {
      const SpectralStats st = SolveTau(spec, n);
      std::vector<Eigen::VectorXd> surrogates;
      for (const auto& kind : cfg.kinds) {
        if (kind == "ground-truth") {
          surrogates.push_back(beta);
        } else if (kind == "optimal") {
          surrogates.push_back(ComputeGainProfile(st).gains.cwiseProduct(beta));
        } else {
          surrogates.push_back(ApplyMask(beta, OptimalMask(st)));
        }
      }
      const std::uint64_t ps = PointSeed(cfg, ai, static_cast<std::uint64_t>(n));
      const OneStageMcResult mc = OneStageMonteCarlo(spec, beta, surrogates, n, cfg.sigma_t_sq,
                                                     cfg.trials, ps, cfg.EffectiveThreads(),
                                                     cfg.noiseless_distillation);
      for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
        const RiskReport th = OneStageRisk(st, spec, beta, surrogates[k], cfg.sigma_t_sq);
        const std::vector<Cell> head = {Str(exp),  Num(alpha),       Num(cfg.beta_exp),
                                        Int(cfg.p), Int(n),          Cell(),
                                        Str(cfg.kinds[k])};
        std::vector<Cell> row = head;
        row.insert(row.end(), {Str("theory"), Num(cfg.sigma_t_sq), Num(cfg.sigma_s_sq),
                               Num(th.total), Num(th.bias), Num(th.variance), Cell(), Cell(),
                               Cell(), Int(static_cast<long long>(cfg.seed))});
        t.AddRow(row);
        const McSummary& m = mc.per_kind[k];
        row = head;
        row.insert(row.end(), {Str("monte-carlo"), Num(cfg.sigma_t_sq), Num(cfg.sigma_s_sq),
                               Num(th.total), Num(th.bias), Num(th.variance), Num(m.mean),
                               Num(m.se), Int(m.trials), Int(static_cast<long long>(cfg.seed))});
        t.AddRow(row);
        r.summary.push_back("alpha=" + Fmt(alpha) + " n=" + std::to_string(n) + " " +
                            cfg.kinds[k] + ": theory=" + Fmt(th.total) + " mc=" + Fmt(m.mean) +
                            " se=" + Fmt(m.se));
      }
    }
  }
  return r;
}

ExperimentResult RunTwoStageGrid(const ExperimentConfig& cfg) {
  ExperimentResult r;
  Table& t = r.table;
  t.columns = kRiskColumns;
  AddStandardMetadata(cfg, t);
  const std::string exp(ExperimentName(cfg.experiment));
  for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
    const double alpha = cfg.alpha_grid[ai];
    const Spectrum spec = PowerLawSpectrum(cfg.p, alpha);
    const Eigen::VectorXd beta = PowerLawSignal(cfg.p, alpha, cfg.beta_exp);
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
      const int n = cfg.n_grid[gi];
      const int m = cfg.m_grid.empty() ? n : cfg.m_grid[gi];
      if (n >= cfg.p || m >= cfg.p) {
        const std::string msg = "skipped n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                " (needs n, m < p)";
        t.AddMeta("warning", msg);
        r.summary.push_back("warning: " + msg);
        continue;
      }
      ProblemInstance inst{spec, spec, beta, cfg.sigma_t_sq, cfg.sigma_s_sq, n, m};
      const RiskReport th = TwoStageRisk(inst);
      TwoStageOptions opt;
      opt.noiseless_distillation = cfg.noiseless_distillation;
      const McSummary mc = TwoStageMonteCarlo(
          inst, cfg.trials, PointSeed(cfg, ai, gi), cfg.EffectiveThreads(), opt);
      const std::vector<Cell> head = {Str(exp), Num(alpha), Num(cfg.beta_exp), Int(cfg.p),
                                      Int(n),   Int(m),     Str("two-stage")};
      std::vector<Cell> row = head;
      row.insert(row.end(), {Str("theory"), Num(cfg.sigma_t_sq), Num(cfg.sigma_s_sq),
                             Num(th.total), Num(th.bias), Num(th.variance), Cell(), Cell(),
                             Cell(), Int(static_cast<long long>(cfg.seed))});
      t.AddRow(row);
      row = head;
      row.insert(row.end(), {Str("monte-carlo"), Num(cfg.sigma_t_sq), Num(cfg.sigma_s_sq),
                             Num(th.total), Num(th.bias), Num(th.variance), Num(mc.mean),
                             Num(mc.se), Int(mc.trials), Int(static_cast<long long>(cfg.seed))});
      t.AddRow(row);
      r.summary.push_back("alpha=" + Fmt(alpha) + " n=" + std::to_string(n) + " m=" +
                          std::to_string(m) + ": theory=" + Fmt(th.total) + " mc=" +
                          Fmt(mc.mean) + " se=" + Fmt(mc.se));
    }
  }
  return r;
}

ExperimentResult RunMaskCount(const ExperimentConfig& cfg) {
  ExperimentResult r;
  Table& t = r.table;
  t.columns = {"alpha", "p", "n", "mask_count", "gain_count", "n_c1", "n_c2",
               "deviation", "tolerance", "within"};
  AddStandardMetadata(cfg, t);
  for (double alpha : cfg.alpha_grid) {
    const Spectrum spec = PowerLawSpectrum(cfg.p, alpha);
    int worst_n = 0;
    double worst = -1.0;
    for (int n : cfg.n_grid) {
      const SpectralStats st = SolveTau(spec, n);
      const auto count = static_cast<long long>(OptimalMask(st).size());
      const GainProfile g = ComputeGainProfile(st);
      const long long gain_count = (g.gains.array() > 1.0).count();
      const CutoffIndices c = ComputeCutoffIndices(alpha, n);
      const double dev = std::abs(static_cast<double>(count) - c.i_mask);
      const double tol = 0.05 * n + 5.0;
      if (dev > worst) {
        worst = dev;
        worst_n = n;
      }
      t.AddRow({Num(alpha), Int(cfg.p), Int(n), Int(count), Int(gain_count), Num(c.i_gain),
                Num(c.i_mask), Num(dev), Num(tol), Int(dev <= tol)});
    }
    r.summary.push_back("alpha=" + Fmt(alpha) + ": largest |count - nC2| = " + Fmt(worst) +
                        " at n=" + std::to_string(worst_n));
  }
  return r;
}

ScalingSlopes ComputeScalingSlopes(double alpha, double beta_exp, int p,
                                   const std::vector<int>& n_grid, double sigma_sq,
                                   bool want_target, bool want_optimal) {
  const Spectrum spec = PowerLawSpectrum(p, alpha);
  const Eigen::VectorXd beta = PowerLawSignal(p, alpha, beta_exp);
  std::vector<double> lx, lt, lo;
  for (int n : n_grid) {
    const SpectralStats st = SolveTau(spec, n);
    lx.push_back(std::log(static_cast<double>(n)));
    if (want_target) lt.push_back(std::log(OmniscientRisk(st, spec, beta, sigma_sq).total));
    if (want_optimal) {
      const Eigen::VectorXd opt = ComputeGainProfile(st).gains.cwiseProduct(beta);
      lo.push_back(std::log(OneStageRisk(st, spec, beta, opt, sigma_sq).total));
    }
  }
  ScalingSlopes s;
  s.predicted = -ScalingExponent(alpha, beta_exp);
  s.target = want_target ? LeastSquaresSlope(lx, lt) : kNaN;
  s.optimal = want_optimal ? LeastSquaresSlope(lx, lo) : kNaN;
  return s;
}

ExperimentResult RunScalingSlope(const ExperimentConfig& cfg) {
  ExperimentResult r;
  Table& t = r.table;
  t.columns = {"alpha", "beta_exp", "p", "n", "kind", "theory_total"};
  AddStandardMetadata(cfg, t);
  const bool want_t =
      std::find(cfg.kinds.begin(), cfg.kinds.end(), "ground-truth") != cfg.kinds.end();
  const bool want_o = std::find(cfg.kinds.begin(), cfg.kinds.end(), "optimal") != cfg.kinds.end();
  for (double alpha : cfg.alpha_grid) {
    const Spectrum spec = PowerLawSpectrum(cfg.p, alpha);
    const Eigen::VectorXd beta = PowerLawSignal(cfg.p, alpha, cfg.beta_exp);
    for (int n : cfg.n_grid) {
      const SpectralStats st = SolveTau(spec, n);
      if (want_t) {
        t.AddRow({Num(alpha), Num(cfg.beta_exp), Int(cfg.p), Int(n), Str("ground-truth"),
                  Num(OmniscientRisk(st, spec, beta, cfg.sigma_t_sq).total)});
      }
      if (want_o) {
        const Eigen::VectorXd opt = ComputeGainProfile(st).gains.cwiseProduct(beta);
        t.AddRow({Num(alpha), Num(cfg.beta_exp), Int(cfg.p), Int(n), Str("optimal"),
                  Num(OneStageRisk(st, spec, beta, opt, cfg.sigma_t_sq).total)});
      }
    }
    const ScalingSlopes s =
        ComputeScalingSlopes(alpha, cfg.beta_exp, cfg.p, cfg.n_grid, cfg.sigma_t_sq, want_t, want_o);
    const std::string tag = "alpha=" + Fmt(alpha);
    t.AddMeta("slope_predicted[" + tag + "]", Fmt(s.predicted));
    if (want_t) t.AddMeta("slope_target[" + tag + "]", Fmt(s.target));
    if (want_o) t.AddMeta("slope_optimal[" + tag + "]", Fmt(s.optimal));
    std::string line = tag + " beta=" + Fmt(cfg.beta_exp) + ": predicted " + Fmt(s.predicted);
    if (want_t) line += ", target " + Fmt(s.target);
    if (want_o) line += ", optimal " + Fmt(s.optimal);
    r.summary.push_back(line);
  }
  return r;
}

}  // namespace w2s::harness
