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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/divergence.hpp"
#include "jsdrazor/estimate.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/optimize.hpp"

namespace jsdrazor {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double rosenbrock(const Vector& x) {
  return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

TEST(NelderMead, FindsRosenbrockMinimum) {
  NelderMeadOptions options;
  options.max_iter = 5000;
  const NelderMeadResult r = nelder_mead(rosenbrock, vec({-1.2, 1.0}), vec({0.1, 0.1}), options);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  EXPECT_LT(r.value, 1e-8);
}

TEST(NelderMead, ReportsNonConvergenceAtIterationCap) {
  NelderMeadOptions options;
  options.max_iter = 5;
  const NelderMeadResult r = nelder_mead(rosenbrock, vec({-1.2, 1.0}), vec({0.1, 0.1}), options);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.iterations, 5);
}

TEST(ShiftedHalton, DependsOnlyOnIndexDimensionAndSeed) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Vector a = shifted_halton(i, 3, 9);
    EXPECT_TRUE(a.isApprox(shifted_halton(i, 3, 9)));
    EXPECT_GE(a.minCoeff(), 0.0);
    EXPECT_LT(a.maxCoeff(), 1.0);
  }
  EXPECT_FALSE(shifted_halton(4, 2, 1).isApprox(shifted_halton(4, 2, 2)));
}

TEST(ShiftedHalton, FillsTheCubeEvenly) {
  const int n = 1024;
  int below = 0;
  for (int i = 0; i < n; ++i)
    if (shifted_halton(static_cast<std::uint64_t>(i), 2, 3)[0] < 0.5) ++below;
  EXPECT_NEAR(below, n / 2, 2);
}

TEST(MinimizeInBox, ConstrainedMinimumOnBoundary) {
  const Box box(vec({1.0, -1.0}), vec({2.0, 1.0}));
  const auto f = [](const Vector& x) { return x.squaredNorm(); };
  const BoxMinimum r = minimize_in_box(f, box, BoxSearchOptions{}, 1);
  EXPECT_TRUE(box.contains(r.x));
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 0.0, 1e-4);
}

TEST(MinimizeInBox, MoreStartsNeverWorsen) {
  const Box box = Box::cube(2, -3.0, 3.0);
  const auto f = [](const Vector& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.05 * x.squaredNorm(); };
  double previous = 1e300;
  for (int starts : {1, 2, 4, 8}) {
    BoxSearchOptions o;
    o.starts = starts;
    const double v = minimize_in_box(f, box, o, 5).value;
    EXPECT_LE(v, previous + 1e-12);
    previous = v;
  }
}

TEST(Bfgs, QuadraticConvergesQuickly) {
  Matrix a(2, 2);
  a << 3, 1, 1, 2;
  const Vector b = vec({1, -1});
  const GradientObjective f = [&](const Vector& x, Vector& g) {
    g = a * x - b;
    return 0.5 * x.dot(a * x) - b.dot(x);
  };
  const QuasiNewtonResult r = bfgs_minimize(f, vec({5, 5}));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.x.isApprox(a.ldlt().solve(b), 1e-6));
}

TEST(Bfgs, Rosenbrock) {
  const GradientObjective f = [](const Vector& x, Vector& g) {
    g.resize(2);
    g[0] = -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]);
    g[1] = 200 * (x[1] - x[0] * x[0]);
    return rosenbrock(x);
  };
  QuasiNewtonOptions o;
  o.max_iter = 500;
  const QuasiNewtonResult r = bfgs_minimize(f, vec({-1.2, 1.0}), o);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(BetterMinimizer, TieBreaks) {
  EXPECT_TRUE(better_minimizer(0.5, vec({1, 1}), 1.0, vec({0, 0})));
  EXPECT_TRUE(better_minimizer(1.0, vec({0.1, 0}), 1.0, vec({1, 0})));
  EXPECT_FALSE(better_minimizer(1.0, vec({1, 0}), 1.0, vec({0.1, 0})));
  EXPECT_TRUE(better_minimizer(1.0, vec({-1, 0}), 1.0, vec({1, 0})));
}

TEST(MinJsdFit, RecoversExactModelPoint) {
  const ParametricModel m = nested_example_model(2);
  const Vector truth = vec({0.7, 0.2});
  const FitResult r = min_jsd_fit(m, m.categorical(truth), OptimizerSettings{}, 3);
  EXPECT_LT((r.theta_hat - truth).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LT(r.objective, 1e-12);
}

TEST(MinJsdFit, ZeroDimensionalSkipsSearch) {
  const Categorical p_hat({0.5, 0.3, 0.2});
  const FitResult r = min_jsd_fit(nested_example_model(0), p_hat);
  EXPECT_EQ(r.theta_hat.size(), 0);
  EXPECT_DOUBLE_EQ(r.objective, jsd(p_hat, Categorical::uniform(3)));
}

TEST(MinJsdFit, FirstOrderConditionAtOptimum) {
  const ParametricModel m = nested_example_model(2);
  const Categorical p_hat = empirical_from_counts(CountVector({50, 30, 20}));
  OptimizerSettings s;
  s.gradient_refine = true;
  const FitResult r = min_jsd_fit(m, p_hat, s, 1);
  EXPECT_LT(jsd_gradient(p_hat, m, r.theta_hat).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r.objective, jsd(p_hat, m.categorical(r.theta_hat)), 1e-15);
}

TEST(MinJsdFit, StaysInBoxForBoundaryData) {
  const ParametricModel m = nested_example_model(2);
  const FitResult r = min_jsd_fit(m, Categorical({1.0, 0.0, 0.0}), OptimizerSettings{}, 2);
  EXPECT_TRUE(m.box().contains(r.theta_hat));
  EXPECT_NEAR(r.theta_hat[0], 3.0, 1e-6);
}

TEST(MinJsdFit, DeterministicInSeed) {
  const ParametricModel m = loglinear_model(LoglinearVariant::Saturated);
  const Categorical p_hat({0.1, 0.2, 0.3, 0.4});
  const FitResult a = min_jsd_fit(m, p_hat, OptimizerSettings{}, 8);
  const FitResult b = min_jsd_fit(m, p_hat, OptimizerSettings{}, 8);
  EXPECT_EQ(a.theta_hat, b.theta_hat);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(MleFit, SaturatedModelReachesEmpiricalEntropy) {
  const CountVector c({120, 340, 260, 280});
  const FitResult r = mle_fit(loglinear_model(LoglinearVariant::Saturated), c, OptimizerSettings{}, 4);
  EXPECT_NEAR(r.objective, 1000.0 * entropy(empirical_from_counts(c)), 1e-8);
}

TEST(MleFit, RecoversExactModelPoint) {
  const FitResult r = mle_fit(nested_example_model(1), CountVector({2, 1, 1}), OptimizerSettings{}, 1);
  EXPECT_NEAR(r.theta_hat[0], std::log(2.0), 1e-5);
}

TEST(MleFit, AgreesWithMinJsdForLargeSamples) {
  const ParametricModel m = nested_example_model(1);
  const CountVector c = sample_multinomial(m.categorical(vec({0.7})), 100000, 17);
  const FitResult ml = mle_fit(m, c, OptimizerSettings{}, 1);
  const FitResult js = min_jsd_fit(m, empirical_from_counts(c), OptimizerSettings{}, 1);
  EXPECT_LT(std::abs(ml.theta_hat[0] - js.theta_hat[0]), 0.01);
  EXPECT_LT(std::abs(ml.theta_hat[0] - 0.7), 0.05);
}

}  // namespace
}  // namespace jsdrazor
