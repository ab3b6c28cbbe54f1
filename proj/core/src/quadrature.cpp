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

#include "jsdrazor/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "jsdrazor/error.hpp"

namespace jsdrazor {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

double integrate_box(const std::function<double(const Vector&)>& f, const Box& box, int nodes) {
  const std::size_t d = box.dim();
  if (d == 0) return f(Vector(0));
  const GaussLegendreRule rule = gauss_legendre(nodes);
  const Vector half = 0.5 * box.width();
  const Vector mid = box.center();
  const double jac = half.prod();

  std::vector<std::size_t> idx(d, 0);
  Vector x(static_cast<Eigen::Index>(d));
  CompensatedSum sum;
  const auto m = static_cast<std::size_t>(nodes);
  while (true) {
    double w = jac;
    for (std::size_t s = 0; s < d; ++s) {
      const auto e = static_cast<Eigen::Index>(s);
      x[e] = mid[e] + half[e] * rule.nodes[idx[s]];
      w *= rule.weights[idx[s]];
    }
    sum.add(w * f(x));
    std::size_t s = 0;
    while (s < d && ++idx[s] == m) idx[s++] = 0;
    if (s == d) break;
  }
  return sum.value();
}

}  // namespace jsdrazor
