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
#include <numbers>
#include <vector>

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/quadrature.hpp"
#include "jsdrazor/rng.hpp"

namespace jsdrazor {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ParametricModel numeric_only(const ParametricModel& m) {
  return ParametricModel(m.name() + "-numeric", m.k(), m.box(), [m](const Vector& t) { return m.probabilities(t); });
}

Vector random_point(const Box& box, Rng& rng, double shrink = 0.9) {
  Vector u(static_cast<Eigen::Index>(box.dim()));
  for (auto& x : u) x = 0.5 + shrink * (rng.uniform() - 0.5);
  return box.from_unit(u);
}

Categorical random_interior(std::size_t k, Rng& rng) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  return Categorical(w);
}

Matrix fisher_closed_form_two(const Vector& t) {
  const double e1 = std::exp(t[0]), e2 = std::exp(t[1]);
  const double scale = std::pow(1.0 + e1 + e2, -3.0);
  Matrix i(2, 2);
  i(0, 0) = scale * e1 * (e1 + (1 + e2) * (1 + e2) + e1 * e2);
  i(0, 1) = i(1, 0) = -scale * e1 * e2 * (1 + e1 + e2);
  i(1, 1) = scale * e2 * (e2 + (1 + e1) * (1 + e1) + e1 * e2);
  return i;
}

TEST(Box, AffineMapsRoundTrip) {
  const Box box(vec({-1, 2}), vec({3, 5}));
  const Vector t = vec({0.5, 4.0});
  EXPECT_TRUE(box.from_unit(box.to_unit(t)).isApprox(t, 1e-15));
  EXPECT_DOUBLE_EQ(box.volume(), 12.0);
  EXPECT_TRUE(box.contains(box.lower()));
  EXPECT_FALSE(box.strictly_contains(box.lower()));
  EXPECT_TRUE(box.clamp(vec({-5, 9})).isApprox(vec({-1, 5})));
}

TEST(Box, RejectsInvertedBounds) {
  EXPECT_THROW(Box(vec({1}), vec({0})), ConfigError);
}

TEST(Multilogit, UniformAtOrigin) {
  const Vector p = nested_example_model(2).probabilities(vec({0, 0}));
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Multilogit, OneParameterFamilyAtPointSeven) {
  const Vector p = nested_example_model(1).probabilities(vec({0.7}));
  EXPECT_NEAR(p[0], 0.5017131981555415, 1e-14);
  EXPECT_NEAR(p[1], 0.2491434009222292, 1e-14);
  EXPECT_NEAR(p[2], 0.2491434009222292, 1e-14);
}

TEST(Multilogit, ZeroDimensionalModelIsUniform) {
  const ParametricModel m = nested_example_model(0);
  EXPECT_EQ(m.d(), 0u);
  const Vector p = m.probabilities(Vector(0));
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Multilogit, NestedFamiliesAgreeOnPinnedCoordinates) {
  const Vector a = nested_example_model(2).probabilities(vec({0.4, 0.0}));
  const Vector b = nested_example_model(1).probabilities(vec({0.4}));
  EXPECT_TRUE(a.isApprox(b, 1e-15));
}

TEST(Loglinear, SymmetricAtZero) {
  const Vector p = loglinear_model(LoglinearVariant::Saturated).probabilities(vec({0, 0, 0}));
  for (double x : p) EXPECT_NEAR(x, 0.25, 1e-15);
}

TEST(Loglinear, MainEffectSignPattern) {
  const Vector p = loglinear_model(LoglinearVariant::Saturated).probabilities(vec({1, 0, 0}));
  const double hi = std::exp(1.0) / (2 * std::exp(1.0) + 2 * std::exp(-1.0));
  const double lo = std::exp(-1.0) / (2 * std::exp(1.0) + 2 * std::exp(-1.0));
  EXPECT_NEAR(p[0], hi, 1e-15);
  EXPECT_NEAR(p[1], hi, 1e-15);
  EXPECT_NEAR(p[2], lo, 1e-15);
  EXPECT_NEAR(p[3], lo, 1e-15);
}

TEST(Loglinear, InteractionSignPattern) {
  const Vector p = loglinear_model(LoglinearVariant::Saturated).probabilities(vec({0, 0, 0.5}));
  EXPECT_NEAR(p[0], 0.3655292893150025, 1e-15);
  EXPECT_NEAR(p[3], 0.3655292893150025, 1e-15);
  EXPECT_NEAR(p[1], p[2], 1e-15);
}

TEST(Loglinear, ExpectedCountsReproduceLogLinearForm) {
  const Vector lambdas = vec({0.3, -0.2, 0.4});
  const auto e = loglinear_expected_counts(lambdas, 500);
  EXPECT_NEAR(e.expected_counts.sum(), 500.0, 1e-10);
  const double x[4] = {1, 1, -1, -1}, y[4] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(std::log(e.expected_counts[i]), e.intercept + x[i] * 0.3 - y[i] * 0.2 + x[i] * y[i] * 0.4, 1e-12);
}

TEST(Jacobian, ColumnsSumToZero) {
  Rng rng(1);
  const ParametricModel m = loglinear_model(LoglinearVariant::Saturated);
  for (int i = 0; i < 20; ++i) {
    const Matrix j = jacobian(m, random_point(m.box(), rng));
    EXPECT_LT(j.colwise().sum().cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Jacobian, AnalyticMatchesFiniteDifferences) {
  Rng rng(2);
  const ParametricModel m = nested_example_model(2);
  const ParametricModel numeric = numeric_only(m);
  ASSERT_TRUE(m.has_analytic_jacobian());
  ASSERT_FALSE(numeric.has_analytic_jacobian());
  for (int i = 0; i < 100; ++i) {
    const Vector t = random_point(m.box(), rng);
    EXPECT_LT((jacobian(m, t) - jacobian(numeric, t)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Jacobian, ZeroDimensional) {
  const Matrix j = jacobian(nested_example_model(0), Vector(0));
  EXPECT_EQ(j.rows(), 3);
  EXPECT_EQ(j.cols(), 0);
}

TEST(Jacobian, RequiresInteriorPoint) {
  const ParametricModel m = nested_example_model(1);
  EXPECT_THROW(jacobian(m, vec({3.0})), DomainError);
}

TEST(SecondDerivatives, AnalyticMatchesFiniteDifferences) {
  Rng rng(3);
  const ParametricModel m = nested_example_model(2);
  const ParametricModel numeric = numeric_only(m);
  for (int i = 0; i < 50; ++i) {
    const Vector t = random_point(m.box(), rng);
    const auto a = second_derivatives(m, t);
    const auto b = second_derivatives(numeric, t);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t s = 0; s < a.size(); ++s) EXPECT_LT((a[s] - b[s]).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(FisherInfo, OneParameterAtZero) {
  const SquareMatrix i = fisher_info(nested_example_model(1), vec({0.0}));
  ASSERT_EQ(i.rows(), 1);
  EXPECT_NEAR(i(0, 0), 2.0 / 9.0, 1e-12);
}

TEST(FisherInfo, OneParameterClosedForm) {
  Rng rng(4);
  const ParametricModel numeric = numeric_only(nested_example_model(1));
  for (int i = 0; i < 100; ++i) {
    const double t = -2.7 + 5.4 * rng.uniform();
    const double closed = 2 * std::exp(t) / std::pow(2 + std::exp(t), 2);
    EXPECT_NEAR(fisher_info(numeric, vec({t}))(0, 0), closed, 1e-8);
    EXPECT_NEAR(fisher_info(nested_example_model(1), vec({t}))(0, 0), closed, 1e-14);
  }
}

TEST(FisherInfo, TwoParameterClosedForm) {
  Rng rng(5);
  const ParametricModel m = nested_example_model(2);
  const ParametricModel numeric = numeric_only(m);
  for (int i = 0; i < 100; ++i) {
    const Vector t = random_point(m.box(), rng);
    const Matrix closed = fisher_closed_form_two(t);
    EXPECT_LT((fisher_info(numeric, t) - closed).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((fisher_info(m, t) - closed).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FisherInfo, ZeroDimensionalHasUnitDeterminant) {
  const SquareMatrix i = fisher_info(nested_example_model(0), Vector(0));
  EXPECT_EQ(i.rows(), 0);
  EXPECT_DOUBLE_EQ(determinant(i), 1.0);
}

TEST(JsdGradient, VanishesAtModelPoint) {
  const ParametricModel m = nested_example_model(2);
  const Vector t = vec({0.7, 0.2});
  EXPECT_LT(jsd_gradient(m.categorical(t), m, t).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(JsdGradient, MatchesFiniteDifferences) {
  Rng rng(6);
  const ParametricModel m = loglinear_model(LoglinearVariant::Saturated);
  for (int i = 0; i < 100; ++i) {
    const Categorical p_hat = random_interior(4, rng);
    const Vector t = random_point(m.box(), rng);
    const Vector g = jsd_gradient(p_hat, m, t);
    for (Eigen::Index s = 0; s < t.size(); ++s) {
      const double h = 1e-6;
      Vector a = t, b = t;
      a[s] += h;
      b[s] -= h;
      const double fd = (jsd(p_hat, m.categorical(a)) - jsd(p_hat, m.categorical(b))) / (2 * h);
      EXPECT_NEAR(g[s], fd, 1e-6);
    }
  }
}

TEST(JsdGradient, RequiresInteriorData) {
  const ParametricModel m = nested_example_model(1);
  EXPECT_THROW(jsd_gradient(Categorical({1.0, 0.0, 0.0}), m, vec({0.0})), BoundaryError);
}

TEST(JsdGradient, ZeroDimensional) {
  EXPECT_EQ(jsd_gradient(Categorical::uniform(3), nested_example_model(0), Vector(0)).size(), 0);
}

TEST(JsdHessian, MatchesFiniteDifferences) {
  Rng rng(7);
  const ParametricModel m = nested_example_model(2);
  for (int i = 0; i < 100; ++i) {
    const Categorical p_hat = random_interior(3, rng);
    const Vector t = random_point(m.box(), rng);
    const Matrix h = jsd_hessian(p_hat, m, t);
    EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    const double step = 1e-4;
    Matrix fd(2, 2);
    for (Eigen::Index s = 0; s < 2; ++s) {
      Vector a = t, b = t;
      a[s] += step;
      b[s] -= step;
      fd.col(s) = (jsd_gradient(p_hat, m, a) - jsd_gradient(p_hat, m, b)) / (2 * step);
    }
    EXPECT_LT((h - fd).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(JsdHessian, QuarterFisherAtModelPoint) {
  Rng rng(8);
  for (const ParametricModel& m : {nested_example_model(1), nested_example_model(2),
                                   loglinear_model(LoglinearVariant::Saturated)}) {
    for (int i = 0; i < 20; ++i) {
      const Vector t = random_point(m.box(), rng);
      const Matrix diff = jsd_hessian(m.categorical(t), m, t) - fisher_info(m, t) / 4.0;
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const GaussLegendreRule rule = gauss_legendre(8);
  double w = 0.0, x14 = 0.0, x15 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    w += rule.weights[i];
    x14 += rule.weights[i] * std::pow(rule.nodes[i], 14);
    x15 += rule.weights[i] * std::pow(rule.nodes[i], 15);
  }
  EXPECT_NEAR(w, 2.0, 1e-14);
  EXPECT_NEAR(x14, 2.0 / 15.0, 1e-14);
  EXPECT_NEAR(x15, 0.0, 1e-14);
}

TEST(IntegrateBox, SeparableGaussian) {
  const Box box = Box::cube(2, -1.0, 2.0);
  const double value = integrate_box([](const Vector& t) { return std::exp(-t.squaredNorm()); }, box, 32);
  const double one = 0.5 * std::sqrt(std::numbers::pi) * (std::erf(2.0) + std::erf(1.0));
  EXPECT_NEAR(value, one * one, 1e-13);
}

TEST(IntegrateBox, ZeroDimensional) {
  EXPECT_DOUBLE_EQ(integrate_box([](const Vector&) { return 3.5; }, Box(), 16), 3.5);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  EXPECT_DOUBLE_EQ(s.value(), 2.0);
}

}  // namespace
}  // namespace jsdrazor
