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

#include "jsdrazor/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"

namespace jsdrazor {

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw DimensionError("box bounds differ in dimension");
  for (Eigen::Index i = 0; i < lower_.size(); ++i)
    if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
      throw ConfigError("box needs finite bounds with lower < upper");
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Box(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

double Box::volume() const { return width().prod(); }

bool Box::contains(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != dim()) return false;
  return ((theta.array() >= lower_.array()) && (theta.array() <= upper_.array())).all();
}

bool Box::strictly_contains(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != dim()) return false;
  return ((theta.array() > lower_.array()) && (theta.array() < upper_.array())).all();
}

Vector Box::clamp(const Vector& theta) const { return theta.cwiseMax(lower_).cwiseMin(upper_); }

Vector Box::to_unit(const Vector& theta) const {
  return ((theta - lower_).array() / width().array()).matrix();
}

Vector Box::from_unit(const Vector& u) const {
  return lower_ + (u.array() * width().array()).matrix();
}

Box Box::head(std::size_t n) const {
  const auto m = static_cast<Eigen::Index>(n);
  return Box(lower_.head(m), upper_.head(m));
}

ParametricModel::ParametricModel(std::string name, std::size_t k, Box box, ProbsFn probs,
                                 JacobianFn jacobian, SecondDerivativesFn second_derivatives)
    : name_(std::move(name)),
      k_(k),
      box_(std::move(box)),
      probs_(std::move(probs)),
      jacobian_(std::move(jacobian)),
      second_(std::move(second_derivatives)) {
  if (k_ < 2) throw ConfigError("model needs k >= 2 categories");
  if (box_.dim() >= k_) throw ConfigError("model dimension must be below the number of categories");
  if (!probs_) throw ConfigError("model needs a probability map");
  const Vector p = probabilities(box_.center());
  if ((p.array() <= 0.0).any()) throw ConfigError("model probabilities must be interior");
}

Vector ParametricModel::probabilities(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != d())
    throw DimensionError("parameter vector has the wrong dimension for " + name_);
  Vector p = probs_(theta);
  if (static_cast<std::size_t>(p.size()) != k_) throw DimensionError("probability map returned wrong k");
  return p;
}

Categorical ParametricModel::categorical(const Vector& theta) const {
  const Vector p = probabilities(theta);
  return Categorical(std::vector<double>(p.data(), p.data() + p.size()));
}

namespace {

// Softmax over rows of a k x d design: p = softmax(G theta).
struct LinearSoftmax {
  Matrix design;

  Vector probs(const Vector& theta) const {
    Vector eta = design * theta;
    const double top = eta.maxCoeff();
    Vector e = (eta.array() - top).exp();
    return e / e.sum();
  }

  Matrix jacobian(const Vector& theta) const {
    const Vector p = probs(theta);
    const Vector mean = design.transpose() * p;
    Matrix centered = design.rowwise() - mean.transpose();
    return p.asDiagonal() * centered;
  }

  std::vector<Matrix> second(const Vector& theta) const {
    const Vector p = probs(theta);
    const Vector mean = design.transpose() * p;
    const Matrix centered = design.rowwise() - mean.transpose();
    const Matrix cov = centered.transpose() * p.asDiagonal() * centered;
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(design.rows()));
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
      const Vector c = centered.row(i).transpose();
      out.emplace_back(p[i] * (c * c.transpose() - cov));
    }
    return out;
  }
};

ParametricModel softmax_model(std::string name, Matrix design, Box box) {
  const auto k = static_cast<std::size_t>(design.rows());
  auto sm = std::make_shared<const LinearSoftmax>(LinearSoftmax{std::move(design)});
  return ParametricModel(
      std::move(name), k, std::move(box), [sm](const Vector& t) { return sm->probs(t); },
      [sm](const Vector& t) { return sm->jacobian(t); },
      [sm](const Vector& t) { return sm->second(t); });
}

}  // namespace

ParametricModel multilogit_model(const Matrix& predictors, std::size_t active_dims, const Box& box,
                                 std::string name) {
  if (!predictors.allFinite()) throw ConfigError("multilogit predictors must be finite");
  if (active_dims > static_cast<std::size_t>(predictors.cols()))
    throw ConfigError("active_dims exceeds the number of predictor columns");
  if (box.dim() != active_dims) throw ConfigError("multilogit box dimension must equal active_dims");
  const auto k = predictors.rows() + 1;
  const auto d = static_cast<Eigen::Index>(active_dims);
  Matrix design = Matrix::Zero(k, d);
  design.topRows(k - 1) = predictors.leftCols(d);
  return softmax_model(std::move(name), std::move(design), box);
}

ParametricModel nested_example_model(std::size_t active_dims) {
  if (active_dims > 2) throw ConfigError("the nested example family has at most 2 parameters");
  Matrix alpha(2, 2);
  alpha << 1, 0, 0, 1;
  return multilogit_model(alpha, active_dims, Box::cube(active_dims, -3.0, 3.0),
                          "M" + std::to_string(active_dims));
}

namespace {
Matrix effect_coding() {
  Matrix g(4, 3);
  // columns: X, Y, XY
  g << 1, 1, 1,
       1, -1, -1,
       -1, 1, -1,
       -1, -1, 1;
  return g;
}
}  // namespace

ParametricModel loglinear_model(LoglinearVariant variant, std::int64_t n) {
  if (n < 1) throw ConfigError("log-linear sample size must be positive");
  const Eigen::Index d = variant == LoglinearVariant::Saturated ? 3 : 2;
  Matrix design = effect_coding().leftCols(d);
  return softmax_model(d == 3 ? "LL3" : "LL2", std::move(design),
                       Box::cube(static_cast<std::size_t>(d), -2.0, 2.0));
}

LoglinearExpectation loglinear_expected_counts(const Vector& lambdas, std::int64_t n) {
  if (lambdas.size() < 2 || lambdas.size() > 3) throw DimensionError("log-linear lambdas have 2 or 3 entries");
  const Matrix g = effect_coding().leftCols(lambdas.size());
  const Vector eta = g * lambdas;
  const double log_norm = std::log(eta.array().exp().sum());
  const double intercept = std::log(static_cast<double>(n)) - log_norm;
  return {(eta.array() + intercept).exp().matrix(), intercept};
}

namespace {

void require_interior(const ParametricModel& m, const Vector& theta) {
  if (static_cast<std::size_t>(theta.size()) != m.d())
    throw DimensionError("parameter vector has the wrong dimension");
  if (!m.box().strictly_contains(theta))
    throw DomainError("theta must lie strictly inside the parameter box of " + m.name());
}

double fd_step(double x, double rel) { return std::max(rel, rel * std::abs(x)); }

Matrix numeric_jacobian(const ParametricModel& m, const Vector& theta) {
  Matrix j(static_cast<Eigen::Index>(m.k()), theta.size());
  for (Eigen::Index s = 0; s < theta.size(); ++s) {
    const double h = fd_step(theta[s], 1e-6);
    Vector up = theta, down = theta;
    up[s] += h;
    down[s] -= h;
    j.col(s) = (m.probabilities(up) - m.probabilities(down)) / (up[s] - down[s]);
  }
  return j;
}

Matrix raw_jacobian(const ParametricModel& m, const Vector& theta) {
  return m.has_analytic_jacobian() ? m.analytic_jacobian()(theta) : numeric_jacobian(m, theta);
}

void require_interior_categorical(const Categorical& p, const char* what) {
  if (!p.interior()) throw BoundaryError(std::string(what) + " must lie in the simplex interior");
}

}  // namespace

Matrix jacobian(const ParametricModel& m, const Vector& theta) {
  if (m.d() == 0) return Matrix(static_cast<Eigen::Index>(m.k()), 0);
  require_interior(m, theta);
  return raw_jacobian(m, theta);
}

std::vector<Matrix> second_derivatives(const ParametricModel& m, const Vector& theta) {
  const auto k = static_cast<Eigen::Index>(m.k());
  const auto d = static_cast<Eigen::Index>(m.d());
  if (d == 0) return std::vector<Matrix>(m.k(), Matrix(0, 0));
  require_interior(m, theta);
  if (m.has_analytic_second_derivatives()) return m.analytic_second_derivatives()(theta);
  // Differences of Jacobians; a coarser step when the Jacobian is itself numeric.
  const double rel = m.has_analytic_jacobian() ? 1e-6 : 1e-4;
  std::vector<Matrix> out(m.k(), Matrix::Zero(d, d));
  for (Eigen::Index t = 0; t < d; ++t) {
    const double h = fd_step(theta[t], rel);
    Vector up = theta, down = theta;
    up[t] += h;
    down[t] -= h;
    const Matrix dj = (raw_jacobian(m, up) - raw_jacobian(m, down)) / (up[t] - down[t]);
    for (Eigen::Index i = 0; i < k; ++i) out[static_cast<std::size_t>(i)].col(t) = dj.row(i).transpose();
  }
  for (auto& h : out) h = 0.5 * (h + h.transpose()).eval();
  return out;
}

SquareMatrix fisher_info(const ParametricModel& m, const Vector& theta) {
  if (m.d() == 0) return SquareMatrix(0, 0);
  require_interior(m, theta);
  const Vector p = m.probabilities(theta);
  if ((p.array() <= 1e-300).any()) throw NumericalUnderflow("category probability underflows in fisher_info");
  const Matrix a = p.cwiseSqrt().cwiseInverse().asDiagonal() * raw_jacobian(m, theta);
  SquareMatrix info = a.transpose() * a;
  return 0.5 * (info + info.transpose());
}

Vector jsd_gradient(const Categorical& p_hat, const ParametricModel& m, const Vector& theta) {
  if (p_hat.k() != m.k()) throw DimensionError("p_hat and model disagree on k");
  if (m.d() == 0) return Vector(0);
  require_interior_categorical(p_hat, "p_hat");
  require_interior(m, theta);
  const Vector p = m.probabilities(theta);
  if ((p.array() <= 0.0).any()) throw BoundaryError("p(theta) must lie in the simplex interior");
  const Matrix j = raw_jacobian(m, theta);
  Vector weight(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    weight[i] = 0.5 * std::log(2.0 * p[i] / (p_hat[static_cast<std::size_t>(i)] + p[i]));
  return j.transpose() * weight;
}

SquareMatrix jsd_hessian(const Categorical& p_hat, const ParametricModel& m, const Vector& theta) {
  if (p_hat.k() != m.k()) throw DimensionError("p_hat and model disagree on k");
  if (m.d() == 0) return SquareMatrix(0, 0);
  require_interior_categorical(p_hat, "p_hat");
  require_interior(m, theta);
  const Vector p = m.probabilities(theta);
  if ((p.array() <= 0.0).any()) throw BoundaryError("p(theta) must lie in the simplex interior");
  const Matrix j = raw_jacobian(m, theta);
  const auto second = second_derivatives(m, theta);
  const auto d = static_cast<Eigen::Index>(m.d());

  SquareMatrix curvature = SquareMatrix::Zero(d, d);
  Vector inv_mix(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double ph = p_hat[static_cast<std::size_t>(i)];
    curvature += phi_js(p[i] / ph).phi_prime * second[static_cast<std::size_t>(i)];
    inv_mix[i] = 1.0 / std::sqrt(ph + p[i]);
  }
  const Matrix a_model = p.cwiseSqrt().cwiseInverse().asDiagonal() * j;
  const Matrix a_mix = inv_mix.asDiagonal() * j;
  SquareMatrix h = curvature + 0.5 * (a_model.transpose() * a_model) - 0.5 * (a_mix.transpose() * a_mix);
  return 0.5 * (h + h.transpose());
}

double determinant(const SquareMatrix& a) {
  if (a.rows() == 0) return 1.0;
  return a.determinant();
}

}  // namespace jsdrazor
