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

#include <span>

#include "jsdrazor/categorical.hpp"

namespace jsdrazor {

// All divergences are in nats. Pairs must have equal k (DimensionError).

/// Kullback-Leibler divergence sum_i p_i ln(p_i / q_i) with 0 ln 0 = 0.
/// Returns +infinity when some p_i > 0 meets q_i = 0.
double kl(const Categorical& p, const Categorical& q);
double kl(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon divergence 1/2 KL(P, M) + 1/2 KL(Q, M), M = (P + Q) / 2.
///
/// Evaluated cell by cell as 1/2 [p log1p(x) + q log1p(-x)], x = (p-q)/(p+q).
/// Each cell is nonnegative, the expression is exactly symmetric in (P, Q),
/// and the result keeps relative accuracy when P and Q are close. Clamped to
/// [0, ln 2].
double jsd(const Categorical& p, const Categorical& q);
double jsd(std::span<const double> p, std::span<const double> q);

/// sqrt(jsd(P, Q)); a metric on the simplex.
double jsd_sqrt(const Categorical& p, const Categorical& q);

/// Variation distance sum_i |p_i - q_i|, in [0, 2].
double total_variation(const Categorical& p, const Categorical& q);

/// Generator of the JSD as a phi-divergence, with its first two derivatives.
struct PhiValues {
  double phi;
  double phi_prime;
  double phi_double_prime;
};

/// phi(u) = u/2 ln u - (u+1)/2 ln((u+1)/2), u > 0. Throws DomainError otherwise.
PhiValues phi_js(double u);

}  // namespace jsdrazor
