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
#include <functional>
#include <span>

#include "jsdrazor/model.hpp"

namespace jsdrazor {

using Objective = std::function<double(const Vector&)>;

struct NelderMeadOptions {
  int max_iter = 2000;
  /// Stop when max f - min f over the simplex is at most f_tol ...
  double f_tol = 1e-10;
  /// ... and every vertex is within x_tol (sup norm) of the best one.
  double x_tol = 1e-8;
};

struct NelderMeadResult {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Unconstrained Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). The initial simplex is start + step_s e_s.
NelderMeadResult nelder_mead(const Objective& f, const Vector& start, const Vector& step,
                             const NelderMeadOptions& options = {});

/// i-th point (0-based) of a Halton sequence in `dim` dimensions, rotated by
/// a seed-dependent shift modulo 1. Depends only on (i, dim, seed).
Vector shifted_halton(std::uint64_t index, std::size_t dim, std::uint64_t seed);

struct BoxSearchOptions {
  int starts = 8;
  NelderMeadOptions nelder_mead{};
  /// Initial simplex edge as a fraction of the box width.
  double initial_step = 0.1;
  /// Outside the box the objective is f(clamp(x)) + penalty * |x - clamp(x)|^2.
  double penalty = 1e3;
  /// Re-run Nelder-Mead from each converged point with a small simplex.
  bool polish = true;
};

struct BoxMinimum {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
  int restarts_used = 0;
};

/// Multi-start Nelder-Mead over a box. Starts are `extra_starts` followed by
/// shifted Halton points, so restart i never depends on the total count. Ties
/// in the objective go to the smaller Euclidean norm, then lexicographic order.
BoxMinimum minimize_in_box(const Objective& f, const Box& box, const BoxSearchOptions& options,
                           std::uint64_t seed, std::span<const Vector> extra_starts = {});

/// Value and gradient; returns +inf (gradient ignored) where undefined.
using GradientObjective = std::function<double(const Vector&, Vector&)>;

struct QuasiNewtonOptions {
  int max_iter = 200;
  /// Stop when the sup norm of the gradient falls below g_tol ...
  double g_tol = 1e-6;
  /// ... or the objective decreases by less than f_tol (relative) per step.
  double f_tol = 1e-10;
};

struct QuasiNewtonResult {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// BFGS with an Armijo backtracking line search on an unconstrained problem.
QuasiNewtonResult bfgs_minimize(const GradientObjective& f, const Vector& start, const QuasiNewtonOptions& options = {});

/// True when `a` should replace `b` as the incumbent minimizer.
bool better_minimizer(double fa, const Vector& a, double fb, const Vector& b);

}  // namespace jsdrazor
