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

#include "jsdrazor/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>

#include "jsdrazor/error.hpp"
#include "jsdrazor/optimize.hpp"

namespace jsdrazor {

namespace {

struct Standardized {
  Vector y;
  double mu = 0.0;
  double scale = 1.0;
  bool degenerate = false;
};

Standardized standardize(const Vector& y) {
  Standardized s;
  s.mu = y.mean();
  const double var = (y.array() - s.mu).square().mean();
  const double sd = std::sqrt(var);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(s.mu)))) {
    s.degenerate = true;
    s.y = Vector::Zero(y.size());
    return s;
  }
  s.scale = sd;
  s.y = (y.array() - s.mu) / sd;
  return s;
}

Matrix to_unit_rows(const Box& box, const Matrix& inputs) {
  Matrix u(inputs.rows(), inputs.cols());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) u.row(i) = box.to_unit(inputs.row(i).transpose()).transpose();
  return u;
}

double se_kernel(const Vector& u, const Vector& v, const GPHyperparameters& h) {
  const double r2 = ((u - v).array() / h.lengthscales.array()).square().sum();
  return h.signal_var * std::exp(-0.5 * r2);
}

Matrix kernel_matrix(const Matrix& u, const GPHyperparameters& h) {
  const Matrix s = u * h.lengthscales.cwiseInverse().asDiagonal();
  const Vector norms = s.rowwise().squaredNorm();
  Matrix k = s * s.transpose();
  k = (-0.5 * ((norms.replicate(1, k.cols()) + norms.transpose().replicate(k.rows(), 1) - 2.0 * k).array().max(0.0)))
          .exp() *
      h.signal_var;
  k.diagonal().setConstant(h.signal_var);
  return k;
}

Vector cross_kernel(const Matrix& u, const Vector& x, const GPHyperparameters& h) {
  const Vector inv = h.lengthscales.cwiseInverse();
  const Vector r2 = ((u.rowwise() - x.transpose()).array().rowwise() * inv.transpose().array()).square().rowwise().sum();
  return h.signal_var * (-0.5 * r2.array()).exp();
}

// Cholesky of K + noise I, escalating jitter 1e-9 .. 1e-6 on failure.
bool cholesky_with_jitter(const Matrix& k, double noise, Matrix& l, double& jitter) {
  const Eigen::Index t = k.rows();
  jitter = 0.0;
  Matrix a;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    a = k;
    a.diagonal().array() += noise + jitter;
    Eigen::LLT<Eigen::Ref<Matrix>> llt(a);
    if (llt.info() == Eigen::Success && a.diagonal().minCoeff() > 0.0) {
      l = a.triangularView<Eigen::Lower>();
      return true;
    }
    jitter = jitter == 0.0 ? 1e-9 : jitter * 10.0;
  }
  l = Matrix::Zero(t, t);
  return false;
}

double lml_from_factor(const Matrix& l, const Vector& z) {
  const double t = static_cast<double>(z.size());
  return -0.5 * z.squaredNorm() - l.diagonal().array().log().sum() - 0.5 * t * std::log(2.0 * std::numbers::pi);
}

}  // namespace

GPSurrogate::GPSurrogate(Box box, const Matrix& inputs, const Vector& outputs, GPHyperparameters h)
    : box_(std::move(box)), h_(std::move(h)) {
  if (inputs.rows() != outputs.size() || static_cast<std::size_t>(inputs.cols()) != box_.dim())
    throw DimensionError("GP inputs and outputs do not match");
  if (inputs.rows() < 1) throw EmptyData("GP needs at least one observation");
  if (static_cast<std::size_t>(h_.lengthscales.size()) != box_.dim())
    throw DimensionError("GP lengthscales do not match the input dimension");
  u_ = to_unit_rows(box_, inputs);
  y_ = outputs;
  const Standardized s = standardize(outputs);
  mu_ = s.mu;
  scale_ = s.scale;
  degenerate_ = s.degenerate;
  factorize();
}

void GPSurrogate::factorize() {
  if (!cholesky_with_jitter(kernel_matrix(u_, h_), h_.noise_var, l_, jitter_))
    throw NumericalUnderflow("GP kernel matrix is not positive definite after jitter");
  const Vector ys = degenerate_ ? Vector::Zero(y_.size()) : Vector((y_.array() - mu_) / scale_);
  z_ = l_.triangularView<Eigen::Lower>().solve(ys);
  lml_ = lml_from_factor(l_, z_);
}

Matrix GPSurrogate::inputs() const {
  Matrix x(u_.rows(), u_.cols());
  for (Eigen::Index i = 0; i < u_.rows(); ++i) x.row(i) = box_.from_unit(u_.row(i).transpose()).transpose();
  return x;
}

double GPSurrogate::kernel_unit(const Vector& u, const Vector& v) const { return se_kernel(u, v, h_); }

Matrix GPSurrogate::cross_kernel_unit(const Matrix& points) const {
  const Vector inv = h_.lengthscales.cwiseInverse();
  const Matrix a = u_ * inv.asDiagonal();
  const Matrix b = inv.asDiagonal() * points;
  const Vector na = a.rowwise().squaredNorm();
  const Vector nb = b.colwise().squaredNorm().transpose();
  Matrix k = a * b;
  k = (-0.5 * ((na.replicate(1, k.cols()) + nb.transpose().replicate(k.rows(), 1) - 2.0 * k).array().max(0.0)))
          .exp() *
      h_.signal_var;
  return k;
}

GPPrediction GPSurrogate::predict(const Vector& theta) const {
  const Vector u = box_.to_unit(theta);
  const Vector k = cross_kernel(u_, u, h_);
  const Vector v = l_.triangularView<Eigen::Lower>().solve(k);
  GPPrediction p;
  p.mean = mu_ + scale_ * v.dot(z_);
  p.variance = scale_ * scale_ * std::max(h_.signal_var - v.squaredNorm(), 0.0);
  return p;
}

bool GPSurrogate::add_point(const Vector& theta, double y) {
  const Vector u = box_.to_unit(theta);
  const Eigen::Index t = u_.rows();
  const Vector k = cross_kernel(u_, u, h_);
  const Vector lk = l_.triangularView<Eigen::Lower>().solve(k);
  const double d2 = h_.signal_var + h_.noise_var + jitter_ - lk.squaredNorm();

  u_.conservativeResize(t + 1, Eigen::NoChange);
  u_.row(t) = u.transpose();
  y_.conservativeResize(t + 1);
  y_[t] = y;
  if (!(d2 > 1e-12 * h_.signal_var)) {
    factorize();
    return false;
  }
  const double delta = std::sqrt(d2);
  l_.conservativeResize(t + 1, t + 1);
  l_.col(t).setZero();
  l_.row(t).head(t) = lk.transpose();
  l_(t, t) = delta;
  const double ys = degenerate_ ? 0.0 : (y - mu_) / scale_;
  z_.conservativeResize(t + 1);
  z_[t] = (ys - lk.dot(z_.head(t))) / delta;
  lml_ = lml_from_factor(l_, z_);
  return true;
}

double gp_log_marginal_likelihood(const Box& box, const Matrix& inputs, const Vector& outputs,
                                  const GPHyperparameters& h) {
  const Matrix u = to_unit_rows(box, inputs);
  const Standardized s = standardize(outputs);
  Matrix l;
  double jitter = 0.0;
  if (!cholesky_with_jitter(kernel_matrix(u, h), h.noise_var, l, jitter))
    return -std::numeric_limits<double>::infinity();
  const Vector z = l.triangularView<Eigen::Lower>().solve(s.y);
  return lml_from_factor(l, z);
}

GPHyperparameters gp_default_hyperparameters(std::size_t d) {
  GPHyperparameters h;
  h.lengthscales = Vector::Constant(static_cast<Eigen::Index>(d), 0.3);
  h.signal_var = 1.0;
  h.noise_var = 1e-2;
  return h;
}

GPSurrogate gp_fit(const Box& box, const Matrix& inputs, const Vector& outputs, const GPFitOptions& options) {
  const std::size_t d = box.dim();
  if (outputs.size() < 2) throw EmptyData("gp_fit needs at least two observations");
  if (inputs.rows() != outputs.size() || static_cast<std::size_t>(inputs.cols()) != d)
    throw DimensionError("GP inputs and outputs do not match");

  const Standardized s = standardize(outputs);
  if (s.degenerate) {
    GPHyperparameters h = options.initial.value_or(gp_default_hyperparameters(d));
    h.signal_var = 1e-6;
    h.noise_var = 1e-6;
    return GPSurrogate(box, inputs, outputs, h);
  }

  std::vector<Eigen::Index> rows;
  const Eigen::Index total = inputs.rows();
  const Eigen::Index used = options.max_points > 1 ? std::min<Eigen::Index>(total, options.max_points) : total;
  for (Eigen::Index i = 0; i < used; ++i) rows.push_back(i * total / used);
  const Matrix u = to_unit_rows(box, inputs(rows, Eigen::all));
  const Vector y_fit = s.y(rows);
  const auto n = static_cast<Eigen::Index>(d);
  Vector lo(n + 2), hi(n + 2);
  lo.head(n).setConstant(std::log(0.05));
  hi.head(n).setConstant(std::log(10.0));
  lo[n] = std::log(1e-6);
  hi[n] = std::log(4.0 + 1e-6);
  lo[n + 1] = std::log(1e-6);
  hi[n + 1] = std::log(1.0 + 1e-8);
  const Box log_box(lo, hi);

  const auto unpack = [n](const Vector& phi) {
    GPHyperparameters h;
    h.lengthscales = phi.head(n).array().exp();
    h.signal_var = std::exp(phi[n]);
    h.noise_var = std::exp(phi[n + 1]);
    return h;
  };
  const auto pack = [n](const GPHyperparameters& h) {
    Vector phi(n + 2);
    phi.head(n) = h.lengthscales.array().log();
    phi[n] = std::log(h.signal_var);
    phi[n + 1] = std::log(h.noise_var);
    return phi;
  };
  const Vector width = hi - lo;
  const auto to_phi = [&](const Vector& psi) {
    return Vector(lo.array() + width.array() / (1.0 + (-psi.array()).exp()));
  };
  const auto to_psi = [&](const Vector& phi) {
    const Vector q = ((phi - lo).array() / width.array()).max(1e-3).min(1.0 - 1e-3);
    return Vector((q.array() / (1.0 - q.array())).log());
  };

  // Negative log marginal likelihood and its gradient in psi coordinates.
  const Eigen::Index t = u.rows();
  std::vector<Matrix> sq_dist(static_cast<std::size_t>(n));
  for (Eigen::Index a = 0; a < n; ++a) {
    const Vector c = u.col(a);
    sq_dist[static_cast<std::size_t>(a)] =
        (c.replicate(1, t) - c.transpose().replicate(t, 1)).array().square().matrix();
  }
  const GradientObjective objective = [&](const Vector& psi, Vector& grad) {
    const Vector phi = to_phi(psi);
    const GPHyperparameters h = unpack(phi);
    const Matrix k = kernel_matrix(u, h);
    Matrix l;
    double jitter = 0.0;
    if (!cholesky_with_jitter(k, h.noise_var, l, jitter)) return std::numeric_limits<double>::infinity();
    const Vector z = l.triangularView<Eigen::Lower>().solve(y_fit);
    const Vector alpha = l.transpose().triangularView<Eigen::Upper>().solve(z);
    Matrix l_inv = Matrix::Identity(t, t);
    l.triangularView<Eigen::Lower>().solveInPlace(l_inv);
    const Matrix w = alpha * alpha.transpose() - l_inv.transpose() * l_inv;
    Vector g_phi(n + 2);
    for (Eigen::Index a = 0; a < n; ++a) {
      const double inv_l2 = 1.0 / (h.lengthscales[a] * h.lengthscales[a]);
      g_phi[a] = 0.5 * inv_l2 * (w.array() * k.array() * sq_dist[static_cast<std::size_t>(a)].array()).sum();
    }
    g_phi[n] = 0.5 * (w.array() * k.array()).sum();
    g_phi[n + 1] = 0.5 * h.noise_var * w.trace();
    const Vector q = (phi - lo).array() / width.array();
    grad = -(g_phi.array() * width.array() * q.array() * (1.0 - q.array())).matrix();
    return -lml_from_factor(l, z);
  };

  QuasiNewtonOptions qn;
  qn.max_iter = options.max_iter;
  qn.g_tol = 1e-5;
  qn.f_tol = 1e-9;
  const GPHyperparameters initial = options.initial.value_or(gp_default_hyperparameters(d));
  Vector best_phi = log_box.clamp(pack(initial));
  double best_value = std::numeric_limits<double>::infinity();
  for (int start = 0; start < std::max(options.starts, 1); ++start) {
    const Vector phi0 = start == 0 ? best_phi
                                   : log_box.from_unit(shifted_halton(static_cast<std::uint64_t>(start - 1),
                                                                      static_cast<std::size_t>(n + 2), options.seed));
    const QuasiNewtonResult r = bfgs_minimize(objective, to_psi(phi0), qn);
    if (!std::isfinite(r.value)) continue;
    const Vector phi = to_phi(r.x);
    if (better_minimizer(r.value, phi, best_value, best_phi)) {
      best_value = r.value;
      best_phi = phi;
    }
  }
  return GPSurrogate(box, inputs, outputs, unpack(best_phi));
}

}  // namespace jsdrazor
