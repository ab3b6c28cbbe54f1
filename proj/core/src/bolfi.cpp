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

#include "jsdrazor/bolfi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/optimize.hpp"
#include "jsdrazor/razor.hpp"

namespace jsdrazor {

std::vector<std::int64_t> split_evenly(std::int64_t n, std::size_t blocks) {
  std::vector<std::int64_t> out(blocks, 0);
  if (blocks == 0) return out;
  const auto b = static_cast<std::int64_t>(blocks);
  for (std::size_t i = 0; i < blocks; ++i) out[i] = n / b + (static_cast<std::int64_t>(i) < n % b ? 1 : 0);
  return out;
}

namespace {

std::vector<Categorical> split_blocks(const std::vector<std::size_t>& sizes, const CountVector& c) {
  std::vector<Categorical> out;
  std::size_t offset = 0;
  for (std::size_t size : sizes) {
    std::vector<std::int64_t> part(c.counts().begin() + static_cast<std::ptrdiff_t>(offset),
                                   c.counts().begin() + static_cast<std::ptrdiff_t>(offset + size));
    out.push_back(empirical_from_counts(CountVector(std::move(part))));
    offset += size;
  }
  return out;
}

std::string describe(const Vector& theta) {
  std::ostringstream o;
  o << '(';
  for (Eigen::Index i = 0; i < theta.size(); ++i) o << (i ? ", " : "") << theta[i];
  o << ')';
  return o.str();
}

}  // namespace

std::vector<Categorical> observed_blocks(const Simulator& sim, const CountVector& data) {
  if (data.k() != sim.k())
    throw DimensionError("observed data has " + std::to_string(data.k()) + " cells, simulator " + sim.name() +
                         " has " + std::to_string(sim.k()));
  return split_blocks(sim.block_sizes(), data);
}

double discrepancy(const Simulator& sim, const Vector& theta, std::span<const Categorical> observed, std::int64_t n,
                   int reps, std::uint64_t seed) {
  if (reps < 1) throw DomainError("discrepancy needs reps >= 1");
  if (n < 1) throw DomainError("discrepancy needs n >= 1");
  const auto sizes = sim.block_sizes();
  if (sizes.size() != observed.size()) throw DimensionError("observed data does not match the simulator blocks");
  double total = 0.0;
  for (int r = 0; r < reps; ++r) {
    CountVector x;
    try {
      x = sim.run(theta, n, derive_seed(seed, static_cast<std::uint64_t>(r)));
    } catch (const SimulatorError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulatorError(std::string("simulator failed: ") + e.what(), describe(theta));
    }
    if (x.k() != sim.k())
      throw SimulatorContractError(sim.name() + " returned " + std::to_string(x.k()) + " cells, expected " +
                                   std::to_string(sim.k()));
    const auto simulated = split_blocks(sizes, x);
    double sum = 0.0;
    for (std::size_t b = 0; b < sizes.size(); ++b) sum += jsd(observed[b], simulated[b]);
    total += sum / static_cast<double>(sizes.size());
  }
  return std::clamp(total / reps, 0.0, std::numbers::ln2);
}

double discrepancy(const Simulator& sim, const Vector& theta, const Categorical& observed, std::int64_t n, int reps,
                   std::uint64_t seed) {
  return discrepancy(sim, theta, std::span<const Categorical>(&observed, 1), n, reps, seed);
}

AcquisitionRule AcquisitionRule::lcb(double beta) {
  if (!(beta > 0.0)) throw ConfigError("LCB beta must be positive");
  return {Kind::LowerConfidenceBound, beta};
}

AcquisitionRule AcquisitionRule::max_variance() { return {Kind::MaxVariance, 0.0}; }

namespace {

// Posterior moments over a fixed quasi-random candidate set, updated by one
// row whenever the GP grows by one point.
class CandidatePool {
 public:
  CandidatePool(const Box& box, int count, std::uint64_t seed, const std::function<bool(const Vector&)>& feasible)
      : box_(box) {
    const auto d = box.dim();
    std::vector<Vector> points;
    for (std::uint64_t i = 0; points.size() < static_cast<std::size_t>(count) && i < 64u * static_cast<std::uint64_t>(count); ++i) {
      Vector u = shifted_halton(i, d, seed);
      if (feasible && !feasible(box.from_unit(u))) continue;
      points.push_back(std::move(u));
    }
    unit_.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(points.size()));
    for (std::size_t j = 0; j < points.size(); ++j) unit_.col(static_cast<Eigen::Index>(j)) = points[j];
  }

  Eigen::Index size() const { return unit_.cols(); }
  Vector theta(Eigen::Index j) const { return box_.from_unit(unit_.col(j)); }

  void rebuild(const GPSurrogate& gp) {
    w_ = gp.cholesky().triangularView<Eigen::Lower>().solve(gp.cross_kernel_unit(unit_));
    mean_acc_ = w_.transpose() * gp.whitened_outputs();
    var_acc_ = w_.colwise().squaredNorm().transpose();
  }

  // The GP has just appended one point by extending its factor.
  void extend(const GPSurrogate& gp) {
    const Eigen::Index t = w_.rows();
    const Matrix& l = gp.cholesky();
    const Vector inv = gp.hyperparameters().lengthscales.cwiseInverse();
    const Vector u_new = gp.unit_inputs().row(t).transpose();
    const Vector r2 = ((unit_.colwise() - u_new).array().colwise() * inv.array()).square().colwise().sum().transpose();
    Vector row = gp.hyperparameters().signal_var * (-0.5 * r2.array()).exp();
    row -= w_.transpose() * l.row(t).head(t).transpose();
    row /= l(t, t);
    w_.conservativeResize(t + 1, Eigen::NoChange);
    w_.row(t) = row.transpose();
    mean_acc_ += gp.whitened_outputs()[t] * row;
    var_acc_ += row.cwiseAbs2();
  }

  GPPrediction predict(const GPSurrogate& gp, Eigen::Index j) const {
    GPPrediction p;
    p.mean = gp.output_mean() + gp.output_scale() * mean_acc_[j];
    p.variance = gp.output_scale() * gp.output_scale() *
                 std::max(gp.hyperparameters().signal_var - var_acc_[j], 0.0);
    return p;
  }

 private:
  Box box_;
  Matrix unit_;
  Matrix w_;
  Vector mean_acc_;
  Vector var_acc_;
};

double acquisition_score(const AcquisitionRule& rule, const GPPrediction& p) {
  const double sd = std::sqrt(p.variance);
  if (rule.kind == AcquisitionRule::Kind::MaxVariance) return -sd;
  return p.mean - rule.beta * sd;
}

Vector optimize_acquisition(const CandidatePool& pool, const GPSurrogate& gp, const AcquisitionRule& rule,
                            const Box& box, const std::function<bool(const Vector&)>& feasible,
                            const AcquisitionOptions& options) {
  if (pool.size() == 0) throw ConstraintError("no feasible acquisition candidates in the box");
  std::vector<double> score(static_cast<std::size_t>(pool.size()));
  for (Eigen::Index j = 0; j < pool.size(); ++j)
    score[static_cast<std::size_t>(j)] = acquisition_score(rule, pool.predict(gp, j));
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  const auto top = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.polish_from, 1)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] < score[b] || (score[a] == score[b] && a < b); });

  const Objective f = [&](const Vector& x) {
    const Vector c = box.clamp(x);
    if (feasible && !feasible(c)) return std::numeric_limits<double>::infinity();
    return acquisition_score(rule, gp.predict(c)) + 1e3 * (x - c).squaredNorm();
  };
  NelderMeadOptions nm;
  nm.max_iter = options.polish_max_iter;
  nm.f_tol = 1e-12;
  nm.x_tol = 1e-7;
  const Vector step = 0.02 * box.width();

  Vector best = pool.theta(static_cast<Eigen::Index>(order[0]));
  double best_value = score[order[0]];
  for (std::size_t i = 0; i < top; ++i) {
    const Vector start = pool.theta(static_cast<Eigen::Index>(order[i]));
    const NelderMeadResult r = nelder_mead(f, start, step, nm);
    const Vector x = box.clamp(r.x);
    if (feasible && !feasible(x)) continue;
    const double value = acquisition_score(rule, gp.predict(x));
    if (better_minimizer(value, x, best_value, best)) {
      best = x;
      best_value = value;
    }
  }
  return best;
}

}  // namespace

Vector acquire(const GPSurrogate& gp, const AcquisitionRule& rule, const Box& box, std::uint64_t seed,
               const std::function<bool(const Vector&)>& feasible, const AcquisitionOptions& options) {
  CandidatePool pool(box, options.candidates, seed, feasible);
  pool.rebuild(gp);
  return optimize_acquisition(pool, gp, rule, box, feasible, options);
}

BolfiResult bolfi_minimize(const Simulator& sim, const CountVector& observed, const BolfiSettings& settings,
                           std::uint64_t seed) {
  if (settings.init_points < 2) throw ConfigError("BOLFI needs at least 2 initialization points");
  if (settings.budget < settings.init_points) throw ConfigError("BOLFI budget must cover the initialization points");
  if (settings.rule.kind == AcquisitionRule::Kind::LowerConfidenceBound && !(settings.rule.beta > 0.0))
    throw ConfigError("LCB beta must be positive");
  const std::vector<Categorical> blocks = observed_blocks(sim, observed);
  const std::int64_t n = settings.n_per_sim > 0 ? settings.n_per_sim : observed.total();
  const Box& box = sim.box();
  const auto d = static_cast<Eigen::Index>(box.dim());
  const std::function<bool(const Vector&)> feasible = [&sim](const Vector& t) { return sim.feasible(t); };

  Matrix x(settings.budget, d);
  Vector y(settings.budget);
  int t = 0;
  const auto evaluate = [&](const Vector& theta) {
    x.row(t) = theta.transpose();
    y[t] = discrepancy(sim, theta, blocks, n, settings.reps, derive_seed(seed, 2, static_cast<std::uint64_t>(t)));
    ++t;
  };

  const std::uint64_t init_seed = derive_seed(seed, 1);
  for (std::uint64_t i = 0; t < settings.init_points; ++i) {
    if (i > 10000u * static_cast<std::uint64_t>(settings.init_points))
      throw ConstraintError("no feasible initialization points for " + sim.name());
    const Vector theta = box.from_unit(shifted_halton(i, box.dim(), init_seed));
    if (sim.feasible(theta)) evaluate(theta);
  }

  GPFitOptions fit_options;
  fit_options.seed = derive_seed(seed, 3);
  GPSurrogate gp = gp_fit(box, x.topRows(t), y.head(t), fit_options);
  CandidatePool pool(box, settings.acquisition.candidates, derive_seed(seed, 4), feasible);
  pool.rebuild(gp);
  int last_fit = t;

  const auto refit = [&] {
    GPFitOptions warm;
    warm.starts = 2;
    warm.initial = gp.hyperparameters();
    warm.seed = derive_seed(seed, 3, static_cast<std::uint64_t>(t));
    gp = gp_fit(box, x.topRows(t), y.head(t), warm);
    pool.rebuild(gp);
    last_fit = t;
  };

  while (t < settings.budget) {
    const Vector theta = optimize_acquisition(pool, gp, settings.rule, box, feasible, settings.acquisition);
    evaluate(theta);
    if (static_cast<double>(t) >= settings.refit_growth * static_cast<double>(last_fit)) {
      refit();
    } else if (gp.add_point(theta, y[t - 1])) {
      pool.extend(gp);
    } else {
      pool.rebuild(gp);
    }
  }
  if (last_fit != t) refit();

  // Minimize the posterior mean over the simulated parameters; away from the
  // data the mean can dip below anything that was observed.
  Eigen::Index best = 0;
  double best_mean = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < t; ++i) {
    const double m = gp.predict(x.row(i).transpose()).mean;
    if (better_minimizer(m, x.row(i).transpose(), best_mean, x.row(best).transpose())) {
      best = i;
      best_mean = m;
    }
  }
  const Vector theta_hat = x.row(best).transpose();
  BolfiResult result;
  result.fit.theta_hat = theta_hat;
  result.fit.objective = std::clamp(best_mean, 0.0, std::numbers::ln2);
  if (settings.final_reps > 0)
    result.fit.objective = discrepancy(sim, theta_hat, blocks, n, settings.final_reps, derive_seed(seed, 5));
  result.fit.evaluations = settings.budget;
  result.fit.converged = true;
  result.fit.restarts_used = 1;
  result.inputs = std::move(x);
  result.outputs = std::move(y);
  result.hyperparameters = gp.hyperparameters();
  return result;
}

double sic_bolfi(const FitResult& fit, std::size_t d, std::int64_t n_o) {
  return 2.0 * static_cast<double>(n_o) * fit.objective + sic_jsd_penalty(d, n_o);
}

}  // namespace jsdrazor
