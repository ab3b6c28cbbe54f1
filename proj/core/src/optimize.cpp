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

#include "jsdrazor/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jsdrazor/error.hpp"
#include "jsdrazor/rng.hpp"

namespace jsdrazor {

NelderMeadResult nelder_mead(const Objective& f, const Vector& start, const Vector& step,
                             const NelderMeadOptions& options) {
  const Eigen::Index n = start.size();
  NelderMeadResult result;
  if (n == 0) {
    result.x = start;
    result.value = f(start);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  std::vector<Vector> x(static_cast<std::size_t>(n + 1), start);
  std::vector<double> fx(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i + 1)][i] += step[i];
  int evals = 0;
  auto eval = [&](const Vector& p) {
    ++evals;
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i < x.size(); ++i) fx[i] = eval(x[i]);

  std::vector<std::size_t> order(x.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<Vector> xs(x.size());
    std::vector<double> fs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      xs[i] = std::move(x[order[i]]);
      fs[i] = fx[order[i]];
    }
    x.swap(xs);
    fx.swap(fs);
  };

  const auto worst = static_cast<std::size_t>(n);
  int iter = 0;
  bool converged = false;
  for (; iter < options.max_iter; ++iter) {
    sort_simplex();
    double spread = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
      spread = std::max(spread, (x[i] - x[0]).cwiseAbs().maxCoeff());
    if (fx[worst] - fx[0] <= options.f_tol && spread <= options.x_tol) {
      converged = true;
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (std::size_t i = 0; i < worst; ++i) centroid += x[i];
    centroid /= static_cast<double>(n);

    const Vector xr = centroid + (centroid - x[worst]);
    const double fr = eval(xr);
    if (fr < fx[0]) {
      const Vector xe = centroid + 2.0 * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[worst - 1]) {
      x[worst] = xr;
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid))
                              : Vector(centroid + 0.5 * (x[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = xc;
      fx[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
      x[i] = x[0] + 0.5 * (x[i] - x[0]);
      fx[i] = eval(x[i]);
    }
  }
  sort_simplex();
  result.x = x[0];
  result.value = fx[0];
  result.evaluations = evals;
  result.iterations = iter;
  result.converged = converged;
  return result;
}

namespace {
constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                     41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}
}  // namespace

Vector shifted_halton(std::uint64_t index, std::size_t dim, std::uint64_t seed) {
  if (dim > std::size(kPrimes)) throw UnsupportedDimension("Halton sequence supports at most 24 dimensions");
  Vector u(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    Rng shift_rng(derive_seed(seed, 0x4A1706ULL, s));
    const double v = radical_inverse(index + 1, kPrimes[s]) + shift_rng.uniform();
    u[static_cast<Eigen::Index>(s)] = v - std::floor(v);
  }
  return u;
}

QuasiNewtonResult bfgs_minimize(const GradientObjective& f, const Vector& start, const QuasiNewtonOptions& options) {
  const Eigen::Index n = start.size();
  QuasiNewtonResult r;
  r.x = start;
  Vector g(n);
  r.value = f(r.x, g);
  r.evaluations = 1;
  if (!std::isfinite(r.value)) return r;
  SquareMatrix h = SquareMatrix::Identity(n, n);
  bool scaled = false;
  Vector g_new(n);
  for (r.iterations = 0; r.iterations < options.max_iter; ++r.iterations) {
    if (g.lpNorm<Eigen::Infinity>() <= options.g_tol) {
      r.converged = true;
      break;
    }
    Vector p = -h * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      h.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    Vector x_new;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = r.x + step * p;
      f_new = f(x_new, g_new);
      ++r.evaluations;
      if (std::isfinite(f_new) && f_new <= r.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Vector s = x_new - r.x;
    const Vector y = g_new - g;
    const double decrease = r.value - f_new;
    r.x = x_new;
    r.value = f_new;
    g = g_new;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const SquareMatrix v = SquareMatrix::Identity(n, n) - rho * s * y.transpose();
      h = v * h * v.transpose() + rho * s * s.transpose();
    }
    if (decrease <= options.f_tol * (1.0 + std::abs(r.value))) {
      r.converged = true;
      ++r.iterations;
      break;
    }
  }
  return r;
}

bool better_minimizer(double fa, const Vector& a, double fb, const Vector& b) {
  if (fa != fb) return fa < fb;
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na != nb) return na < nb;
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

BoxMinimum minimize_in_box(const Objective& f, const Box& box, const BoxSearchOptions& options,
                           std::uint64_t seed, std::span<const Vector> extra_starts) {
  const Eigen::Index d = static_cast<Eigen::Index>(box.dim());
  BoxMinimum best;
  if (d == 0) {
    best.x = Vector(0);
    best.value = f(best.x);
    best.evaluations = 1;
    best.converged = true;
    return best;
  }
  const Objective penalized = [&](const Vector& x) {
    const Vector c = box.clamp(x);
    return f(c) + options.penalty * (x - c).squaredNorm();
  };
  const Vector step = options.initial_step * box.width();
  NelderMeadOptions polish_opts = options.nelder_mead;

  const int total = static_cast<int>(extra_starts.size()) + std::max(options.starts, 0);
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < total; ++r) {
    const Vector start = r < static_cast<int>(extra_starts.size())
                             ? box.clamp(extra_starts[static_cast<std::size_t>(r)])
                             : box.from_unit(shifted_halton(
                                   static_cast<std::uint64_t>(r - static_cast<int>(extra_starts.size())),
                                   box.dim(), seed));
    NelderMeadResult run = nelder_mead(penalized, start, step, options.nelder_mead);
    int evals = run.evaluations;
    if (options.polish) {
      NelderMeadResult again = nelder_mead(penalized, run.x, 1e-3 * step, polish_opts);
      evals += again.evaluations;
      if (again.value <= run.value) {
        again.evaluations = evals;
        run = std::move(again);
      }
    }
    best.evaluations += evals;
    const Vector x = box.clamp(run.x);
    const double value = f(x);
    ++best.evaluations;
    if (best.restarts_used == 0 || better_minimizer(value, x, best.value, best.x)) {
      best.x = x;
      best.value = value;
      best.converged = run.converged;
    }
    ++best.restarts_used;
  }
  return best;
}

}  // namespace jsdrazor
