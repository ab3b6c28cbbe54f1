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
#include <optional>

#include "jsdrazor/model.hpp"

namespace jsdrazor {

struct GPHyperparameters {
  /// Per-coordinate lengthscales in unit-cube coordinates.
  Vector lengthscales;
  /// Signal and noise variances on the standardized output scale.
  double signal_var = 1.0;
  double noise_var = 1e-2;
};

struct GPPrediction {
  double mean = 0.0;
  /// Variance of the latent function (no observation noise).
  double variance = 0.0;
};

/// Gaussian-process regression with a squared-exponential ARD kernel and
/// Gaussian noise. Inputs are mapped to the unit cube of `box`; outputs are
/// standardized with the mean and sd fixed at construction.
class GPSurrogate {
 public:
  GPSurrogate(Box box, const Matrix& inputs, const Vector& outputs, GPHyperparameters h);

  std::size_t size() const noexcept { return static_cast<std::size_t>(y_.size()); }
  const Box& box() const noexcept { return box_; }
  const GPHyperparameters& hyperparameters() const noexcept { return h_; }
  /// Training inputs in the original parameter coordinates, one per row.
  Matrix inputs() const;
  const Vector& outputs() const noexcept { return y_; }
  bool degenerate() const noexcept { return degenerate_; }
  double jitter() const noexcept { return jitter_; }

  GPPrediction predict(const Vector& theta) const;
  double log_marginal_likelihood() const noexcept { return lml_; }

  /// Appends one observation by extending the Cholesky factor; the
  /// hyperparameters and output standardization are kept. Returns false when
  /// the factor had to be recomputed from scratch instead.
  bool add_point(const Vector& theta, double y);

  // Pieces for incremental posterior updates over a fixed candidate set.
  double kernel_unit(const Vector& u, const Vector& v) const;
  // Kernel between the training inputs and unit-cube points given as columns.
  Matrix cross_kernel_unit(const Matrix& points) const;
  const Matrix& unit_inputs() const noexcept { return u_; }
  /// Lower Cholesky factor of K + noise I (+ jitter I).
  const Matrix& cholesky() const noexcept { return l_; }
  /// L^{-1} times the standardized outputs.
  const Vector& whitened_outputs() const noexcept { return z_; }
  double output_mean() const noexcept { return mu_; }
  double output_scale() const noexcept { return scale_; }

 private:
  void factorize();

  Box box_;
  GPHyperparameters h_;
  Matrix u_;
  Vector y_;
  double mu_ = 0.0;
  double scale_ = 1.0;
  bool degenerate_ = false;
  double jitter_ = 0.0;
  Matrix l_;
  Vector z_;
  double lml_ = 0.0;
};

struct GPFitOptions {
  int starts = 4;
  int max_iter = 100;
  /// Used as the first start (warm start); otherwise a generic default.
  std::optional<GPHyperparameters> initial;
  std::uint64_t seed = 0;
  /// Hyperparameters are fitted on at most this many evenly strided
  /// observations; the returned surrogate conditions on all of them.
  int max_points = 128;
};

/// Log marginal likelihood of standardized data under the given hyperparameters.
double gp_log_marginal_likelihood(const Box& box, const Matrix& inputs, const Vector& outputs,
                                  const GPHyperparameters& h);

/// Default starting hyperparameters: lengthscales 0.3, signal variance 1,
/// noise variance 0.01.
GPHyperparameters gp_default_hyperparameters(std::size_t d);

/// Maximizes the log marginal likelihood over lengthscale in [0.05, 10],
/// signal variance in [1e-6, 4 var + 1e-6] and noise in [1e-6, var + 1e-8]
/// (var of the standardized outputs) with multi-start BFGS in log space.
/// Constant outputs give a degenerate fit with noise at its lower bound.
GPSurrogate gp_fit(const Box& box, const Matrix& inputs, const Vector& outputs, const GPFitOptions& options = {});

}  // namespace jsdrazor
