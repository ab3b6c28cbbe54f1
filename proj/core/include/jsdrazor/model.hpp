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

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "jsdrazor/categorical.hpp"

namespace jsdrazor {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Fisher information, JSD Hessians. Symmetric within 1e-9 when produced here.
using SquareMatrix = Eigen::MatrixXd;

/// Axis-aligned compact parameter box, lower < upper in every coordinate.
class Box {
 public:
  Box() = default;
  Box(Vector lower, Vector upper);
  /// The same interval [lo, hi] in each of `dim` coordinates.
  static Box cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.size()); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  Vector center() const { return 0.5 * (lower_ + upper_); }
  Vector width() const { return upper_ - lower_; }
  double volume() const;

  bool contains(const Vector& theta) const;
  bool strictly_contains(const Vector& theta) const;
  Vector clamp(const Vector& theta) const;
  /// Affine maps between the box and the unit cube.
  Vector to_unit(const Vector& theta) const;
  Vector from_unit(const Vector& u) const;
  /// The first `n` coordinates.
  Box head(std::size_t n) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// A candidate model: a smooth map from a compact box to the simplex interior.
///
/// `probs` must be a pure function. The optional Jacobian returns the k x d
/// matrix whose row j is dp_j/dtheta; the optional second-derivative map
/// returns k matrices of size d x d. Missing derivatives fall back to central
/// finite differences.
class ParametricModel {
 public:
  using ProbsFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;
  using SecondDerivativesFn = std::function<std::vector<Matrix>(const Vector&)>;

  ParametricModel(std::string name, std::size_t k, Box box, ProbsFn probs,
                  JacobianFn jacobian = {}, SecondDerivativesFn second_derivatives = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t d() const noexcept { return box_.dim(); }
  const Box& box() const noexcept { return box_; }

  /// Raw category probabilities p(theta); theta need not lie in the box.
  Vector probabilities(const Vector& theta) const;
  Categorical categorical(const Vector& theta) const;

  bool has_analytic_jacobian() const noexcept { return static_cast<bool>(jacobian_); }
  bool has_analytic_second_derivatives() const noexcept { return static_cast<bool>(second_); }
  const JacobianFn& analytic_jacobian() const noexcept { return jacobian_; }
  const SecondDerivativesFn& analytic_second_derivatives() const noexcept { return second_; }

 private:
  std::string name_;
  std::size_t k_;
  Box box_;
  ProbsFn probs_;
  JacobianFn jacobian_;
  SecondDerivativesFn second_;
};

/// Multinomial-logit family p_i = exp(<alpha_i, theta> - M(theta)).
///
/// `predictors` holds alpha_1..alpha_{k-1} as rows; the base category k has
/// the all-zero predictor. Only the first `active_dims` columns are free, the
/// rest are pinned at zero, which realizes nested families. `box` must have
/// dimension `active_dims`.
ParametricModel multilogit_model(const Matrix& predictors, std::size_t active_dims, const Box& box,
                                 std::string name = "multilogit");

/// The nested k = 3 family with alpha_1 = (1, 0), alpha_2 = (0, 1) and
/// 0, 1 or 2 free parameters on [-3, 3]^d. Names: "M0", "M1", "M2".
ParametricModel nested_example_model(std::size_t active_dims);

enum class LoglinearVariant { TwoParameter, Saturated };

/// Effect-coded 2x2 log-linear model over cells (X, Y) = (1,1), (1,-1),
/// (-1,1), (-1,-1). theta = (lambda_X, lambda_Y[, lambda_XY]) on [-2, 2]^d.
/// `n` is the sample size used for expected counts; probabilities do not
/// depend on it. Names: "LL2", "LL3".
ParametricModel loglinear_model(LoglinearVariant variant, std::int64_t n = 1);

/// Expected cell counts mu_i = n p_i(theta) and the intercept lambda with
/// log mu_i = lambda + X_i lx + Y_i ly + X_i Y_i lxy.
struct LoglinearExpectation {
  Vector expected_counts;
  double intercept;
};
LoglinearExpectation loglinear_expected_counts(const Vector& lambdas, std::int64_t n);

/// Row j is dp_j/dtheta. Analytic when available, otherwise central
/// differences with step max(1e-6, 1e-6 |theta_s|). theta must lie strictly
/// inside the box (DomainError). d = 0 gives a k x 0 matrix.
Matrix jacobian(const ParametricModel& m, const Vector& theta);

/// Second derivatives d^2 p_j / dtheta_s dtheta_t, one d x d matrix per category.
std::vector<Matrix> second_derivatives(const ParametricModel& m, const Vector& theta);

/// I(theta) = A^T A with A = diag(p)^{-1/2} J. Throws NumericalUnderflow when
/// some p_i(theta) <= 1e-300.
SquareMatrix fisher_info(const ParametricModel& m, const Vector& theta);

/// Gradient of D_JS(p_hat, p(theta)) in theta:
/// 1/2 sum_i ln(2 p_i / (p_hat_i + p_i)) dp_i/dtheta. Requires interior p_hat
/// (BoundaryError).
Vector jsd_gradient(const Categorical& p_hat, const ParametricModel& m, const Vector& theta);

/// Hessian of D_JS(p_hat, p(theta)) in theta:
/// sum_i phi'(p_i/p_hat_i) d^2 p_i + I/2 - A(p_hat)^T A(p_hat)/2 with
/// A(p_hat) = diag(p_hat + p)^{-1/2} J.
SquareMatrix jsd_hessian(const Categorical& p_hat, const ParametricModel& m, const Vector& theta);

/// Determinant with the empty-product convention det([]) = 1.
double determinant(const SquareMatrix& a);

}  // namespace jsdrazor
