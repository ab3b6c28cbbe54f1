// Copyright 2026 The jsdrazor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/estimate.hpp"
#include "jsdrazor/gp.hpp"
#include "jsdrazor/model.hpp"

namespace jsdrazor {

/// A stochastic categorical data generator M(theta).
///
/// run() must be deterministic in (theta, n, seed), return exactly n counts
/// over k() cells, and be callable concurrently. Multi-block simulators (one
/// block per observation time) report their block layout; n is then split
/// evenly over the blocks, earlier blocks taking the remainder.
class Simulator {
 public:
  virtual ~Simulator() = default;

  virtual std::string name() const = 0;
  virtual std::size_t k() const = 0;
  virtual const Box& box() const = 0;
  std::size_t d() const { return box().dim(); }
  virtual CountVector run(const Vector& theta, std::int64_t n, std::uint64_t seed) const = 0;

  virtual std::vector<std::size_t> block_sizes() const { return {k()}; }
  /// Extra parameter constraints beyond the box.
  virtual bool feasible(const Vector&) const { return true; }
};

/// Sample sizes of each block when n is split evenly.
std::vector<std::int64_t> split_evenly(std::int64_t n, std::size_t blocks);

/// Per-block empirical distributions of an observed data set laid out like
/// the simulator output.
std::vector<Categorical> observed_blocks(const Simulator& sim, const CountVector& data);

/// Mean over reps of the block-averaged D_JS between observed and simulated
/// empirical distributions. Rep r uses seed derive_seed(seed, r).
double discrepancy(const Simulator& sim, const Vector& theta, std::span<const Categorical> observed, std::int64_t n,
                   int reps, std::uint64_t seed);
double discrepancy(const Simulator& sim, const Vector& theta, const Categorical& observed, std::int64_t n, int reps,
                   std::uint64_t seed);

struct AcquisitionRule {
  enum class Kind { LowerConfidenceBound, MaxVariance };
  Kind kind = Kind::LowerConfidenceBound;
  double beta = 2.0;

  static AcquisitionRule lcb(double beta);
  static AcquisitionRule max_variance();
};

struct AcquisitionOptions {
  int candidates = 1024;
  int polish_from = 2;
  int polish_max_iter = 30;
};

/// LCB: argmin of mean - beta sd. MaxVariance: argmax of sd. Searches
/// quasi-random candidates, then polishes the best few with Nelder-Mead.
/// Infeasible points are never returned. `beta = 0` is allowed here and
/// gives the posterior-mean minimizer.
Vector acquire(const GPSurrogate& gp, const AcquisitionRule& rule, const Box& box, std::uint64_t seed,
               const std::function<bool(const Vector&)>& feasible = {}, const AcquisitionOptions& options = {});

struct BolfiSettings {
  /// Total number of parameter points evaluated, initialization included.
  int budget = 200;
  int init_points = 10;
  AcquisitionRule rule{};
  int reps = 1;
  /// Simulated sample size per run; 0 means the observed size.
  std::int64_t n_per_sim = 0;
  /// Hyperparameters are refit whenever the data grows by this factor.
  double refit_growth = 1.5;
  AcquisitionOptions acquisition{};
  /// Fresh simulations used to re-estimate the discrepancy at theta_hat; 0
  /// keeps the posterior mean.
  int final_reps = 0;
};

struct BolfiResult {
  FitResult fit;
  Matrix inputs;
  Vector outputs;
  GPHyperparameters hyperparameters;
};

/// Minimizes the GP posterior mean of the expected discrepancy. The fit
/// objective is the posterior mean at theta_hat clamped to [0, ln 2], or the
/// average of final_reps fresh discrepancies when final_reps > 0, and
/// fit.evaluations equals the budget.
BolfiResult bolfi_minimize(const Simulator& sim, const CountVector& observed, const BolfiSettings& settings,
                           std::uint64_t seed);

/// 2 n fit.objective + d ln sqrt(n / 8 pi).
double sic_bolfi(const FitResult& fit, std::size_t d, std::int64_t n_o);

}  // namespace jsdrazor
