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

#include <ostream>
#include <span>
#include <vector>

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/model.hpp"

namespace jsdrazor {

struct PriorSpec {
  enum class Kind { UniformOnBox, Jeffreys };
  Kind kind = Kind::UniformOnBox;
  /// Gauss-Legendre nodes per dimension, at least 8.
  int nodes = 64;

  static PriorSpec uniform(int nodes = 64);
  static PriorSpec jeffreys(int nodes = 64);
};

/// P(D | M) = integral of P_theta(D) p(theta) over the box, with P_theta(D)
/// the probability of the observed sequence. Limited to d <= 2 and n <= 50.
double model_evidence(const ParametricModel& m, const CountVector& c, const PriorSpec& prior);

struct RazorBound {
  /// Integral of the multinomial probability of the observed type.
  double evidence_scaled = 0.0;
  /// Integral of exp(-n KL(p_hat, p_theta)).
  double kl_razor = 0.0;
  /// Integral of exp(-2 n JSD(p_hat, p_theta)).
  double jsd_razor = 0.0;

  /// evidence_scaled <= kl_razor <= jsd_razor up to 1e-12 relative slack.
  bool chain_holds() const;
};

RazorBound razor_bound_check(const ParametricModel& m, const CountVector& c, const PriorSpec& prior);

struct AcceptanceRow {
  double epsilon = 0.0;
  double integral = 0.0;
  double limit_target = 0.0;
};

struct AcceptanceTable {
  std::vector<AcceptanceRow> rows;
  /// (n! / prod n_j!) P(D | M).
  double limit_target = 0.0;
  /// Largest |scaled P_theta(A_eps) - P_theta(D)| at the smallest epsilon
  /// over a grid of parameter points.
  double corollary_max_error = 0.0;

  /// CSV with columns epsilon, integral, limit_target.
  void write_csv(std::ostream& out) const;
};

/// Default grid: 12 log-spaced values from sqrt(ln 2) down to half the
/// smallest positive sqrt-JSD between two types of size n over k categories.
std::vector<double> default_epsilon_grid(std::size_t k, std::int64_t n);

/// Exact ABC acceptance rate integral of P_theta(A_eps) p(theta) where
/// A_eps = {X : sqrt JSD(p_hat_D, p_hat_X) <= eps}, by enumerating all of
/// A^n grouped by type. Requires k^n <= 1e5 (UnsupportedScale).
AcceptanceTable acceptance_rate_limit(const ParametricModel& m, const CountVector& data, const PriorSpec& prior,
                                      std::span<const double> epsilon_grid = {});

}  // namespace jsdrazor
