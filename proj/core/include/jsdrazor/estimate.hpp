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

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/optimize.hpp"

namespace jsdrazor {

struct OptimizerSettings {
  int starts = 8;
  int max_iter = 2000;
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  /// Newton steps on the analytic JSD gradient/Hessian after the simplex
  /// search. Only used for min-JSD fits with interior data.
  bool gradient_refine = false;

  BoxSearchOptions box_search() const;
};

struct FitResult {
  Vector theta_hat;
  /// Attained D_JS for JSD fits, -ln P(D) for likelihood fits (nats).
  double objective = 0.0;
  int evaluations = 0;
  bool converged = false;
  int restarts_used = 0;
};

/// theta_hat = argmin over the model box of D_JS(p_hat, p(theta)).
FitResult min_jsd_fit(const ParametricModel& m, const Categorical& p_hat,
                      const OptimizerSettings& settings = {}, std::uint64_t seed = 0);

/// Maximum likelihood: minimizes D_KL(p_hat, p(theta)) and reports
/// -ln P(D) = n H(p_hat) + n D_KL(p_hat, p(theta_hat)).
FitResult mle_fit(const ParametricModel& m, const CountVector& c,
                  const OptimizerSettings& settings = {}, std::uint64_t seed = 0);

}  // namespace jsdrazor
