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

#include "jsdrazor/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jsdrazor/error.hpp"

namespace jsdrazor {

namespace {
void check_dims(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("distributions over different alphabets");
}

double jsd_cell(double p, double q) {
  if (p == 0.0 && q == 0.0) return 0.0;
  if (p == 0.0) return 0.5 * q * std::numbers::ln2;
  if (q == 0.0) return 0.5 * p * std::numbers::ln2;
  const double x = (p - q) / (p + q);
  return 0.5 * (p * std::log1p(x) + q * std::log1p(-x));
}
}  // namespace

double kl(std::span<const double> p, std::span<const double> q) {
  check_dims(p.size(), q.size());
  double out = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    out += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(out, 0.0);
}

double kl(const Categorical& p, const Categorical& q) { return kl(p.probs(), q.probs()); }

double jsd(std::span<const double> p, std::span<const double> q) {
  check_dims(p.size(), q.size());
  double out = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) out += jsd_cell(p[i], q[i]);
  return std::clamp(out, 0.0, std::numbers::ln2);
}

double jsd(const Categorical& p, const Categorical& q) { return jsd(p.probs(), q.probs()); }

double jsd_sqrt(const Categorical& p, const Categorical& q) { return std::sqrt(jsd(p, q)); }

double total_variation(const Categorical& p, const Categorical& q) {
  check_dims(p.k(), q.k());
  double out = 0.0;
  for (std::size_t i = 0; i < p.k(); ++i) out += std::abs(p[i] - q[i]);
  return out;
}

PhiValues phi_js(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("phi_js is defined for u > 0");
  const double half = 0.5 * (u + 1.0);
  return {
      0.5 * u * std::log(u) - half * std::log(half),
      0.5 * std::log(u / half),
      1.0 / (2.0 * u * (u + 1.0)),
  };
}

}  // namespace jsdrazor
