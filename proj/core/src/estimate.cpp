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

#include "jsdrazor/estimate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"

namespace jsdrazor {

BoxSearchOptions OptimizerSettings::box_search() const {
  BoxSearchOptions o;
  o.starts = starts;
  o.nelder_mead.max_iter = max_iter;
  o.nelder_mead.f_tol = f_tol;
  o.nelder_mead.x_tol = x_tol;
  return o;
}

namespace {

void check_k(const ParametricModel& m, std::size_t k) {
  if (m.k() != k)
    throw DimensionError("data has " + std::to_string(k) + " categories, model " + m.name() + " has " +
                         std::to_string(m.k()));
}

FitResult from_box(BoxMinimum&& b) {
  FitResult r;
  r.theta_hat = std::move(b.x);
  r.objective = b.value;
  r.evaluations = b.evaluations;
  r.converged = b.converged;
  r.restarts_used = b.restarts_used;
  return r;
}

void newton_refine(const ParametricModel& m, const Categorical& p_hat, FitResult& fit) {
  const auto objective = [&](const Vector& t) {
    const Vector p = m.probabilities(t);
    return jsd(p_hat.probs(), std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
  };
  for (int step = 0; step < 20; ++step) {
    if (!m.box().strictly_contains(fit.theta_hat)) return;
    const Vector g = jsd_gradient(p_hat, m, fit.theta_hat);
    const SquareMatrix h = jsd_hessian(p_hat, m, fit.theta_hat);
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() != Eigen::Success) return;
    const Vector next = fit.theta_hat - llt.solve(g);
    if (!m.box().strictly_contains(next)) return;
    const double value = objective(next);
    ++fit.evaluations;
    if (!(value < fit.objective)) return;
    fit.theta_hat = next;
    fit.objective = value;
  }
}

}  // namespace

FitResult min_jsd_fit(const ParametricModel& m, const Categorical& p_hat, const OptimizerSettings& settings,
                      std::uint64_t seed) {
  check_k(m, p_hat.k());
  const auto objective = [&](const Vector& t) {
    const Vector p = m.probabilities(t);
    return jsd(p_hat.probs(), std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
  };
  FitResult fit = from_box(minimize_in_box(objective, m.box(), settings.box_search(), seed));
  if (settings.gradient_refine && m.d() > 0 && p_hat.interior()) newton_refine(m, p_hat, fit);
  fit.objective = std::clamp(fit.objective, 0.0, std::log(2.0));
  return fit;
}

FitResult mle_fit(const ParametricModel& m, const CountVector& c, const OptimizerSettings& settings,
                  std::uint64_t seed) {
  check_k(m, c.k());
  const Categorical p_hat = empirical_from_counts(c);
  const auto objective = [&](const Vector& t) {
    const Vector p = m.probabilities(t);
    return kl(p_hat.probs(), std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
  };
  FitResult fit = from_box(minimize_in_box(objective, m.box(), settings.box_search(), seed));
  const double n = static_cast<double>(c.total());
  fit.objective = n * entropy(p_hat) + n * std::max(fit.objective, 0.0);
  return fit;
}

}  // namespace jsdrazor
