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

#include "jsdrazor/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "jsdrazor/csv.hpp"
#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/quadrature.hpp"

namespace jsdrazor {

PriorSpec PriorSpec::uniform(int nodes) { return {Kind::UniformOnBox, nodes}; }
PriorSpec PriorSpec::jeffreys(int nodes) { return {Kind::Jeffreys, nodes}; }

namespace {

void check_prior(const PriorSpec& prior) {
  if (prior.nodes < 8) throw ConfigError("prior quadrature needs at least 8 nodes per dimension");
}

void check_model(const ParametricModel& m, const CountVector& c) {
  if (m.d() > 2) throw UnsupportedDimension("exact evidence quadrature supports d <= 2");
  if (c.k() != m.k()) throw DimensionError("counts do not match the model categories");
  if (c.total() < 1) throw EmptyData("evidence needs at least one observation");
}

// Prior density on the box; unused for d = 0.
std::function<double(const Vector&)> prior_density(const ParametricModel& m, const PriorSpec& prior) {
  if (m.d() == 0) return [](const Vector&) { return 1.0; };
  if (prior.kind == PriorSpec::Kind::UniformOnBox) {
    const double inv = 1.0 / m.box().volume();
    return [inv](const Vector&) { return inv; };
  }
  const auto root_det = [&m](const Vector& t) { return std::sqrt(std::max(determinant(fisher_info(m, t)), 0.0)); };
  const double volume = integrate_box(root_det, m.box(), prior.nodes);
  return [root_det, volume](const Vector& t) { return root_det(t) / volume; };
}

double log_sequence_probability(std::span<const std::int64_t> counts, const Vector& p) {
  double s = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (counts[j] > 0) s += static_cast<double>(counts[j]) * std::log(p[static_cast<Eigen::Index>(j)]);
  return s;
}

double integrate_prior(const ParametricModel& m, const PriorSpec& prior,
                       const std::function<double(const Vector&)>& density,
                       const std::function<double(const Vector&)>& f) {
  if (m.d() == 0) return f(Vector(0));
  return integrate_box([&](const Vector& t) { return f(t) * density(t); }, m.box(), prior.nodes);
}

void for_each_type(std::size_t k, std::int64_t n, const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> c(k, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == k) {
      c[i] = left;
      fn(c);
      return;
    }
    for (std::int64_t v = left; v >= 0; --v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n);
}

Categorical type_of(const std::vector<std::int64_t>& c) { return empirical_from_counts(CountVector(c)); }

}  // namespace

double model_evidence(const ParametricModel& m, const CountVector& c, const PriorSpec& prior) {
  check_prior(prior);
  check_model(m, c);
  if (c.total() > 50) throw UnsupportedScale("exact evidence quadrature supports n <= 50");
  const auto density = prior_density(m, prior);
  return integrate_prior(m, prior, density, [&](const Vector& t) {
    return std::exp(log_sequence_probability(c.counts(), m.probabilities(t)));
  });
}

bool RazorBound::chain_holds() const {
  const auto le = [](double a, double b) { return a <= b + 1e-12 * std::max(std::abs(b), 1e-300); };
  return le(evidence_scaled, kl_razor) && le(kl_razor, jsd_razor);
}

RazorBound razor_bound_check(const ParametricModel& m, const CountVector& c, const PriorSpec& prior) {
  check_prior(prior);
  check_model(m, c);
  if (c.total() > 50) throw UnsupportedScale("exact evidence quadrature supports n <= 50");
  const auto density = prior_density(m, prior);
  const Categorical p_hat = empirical_from_counts(c);
  const double n = static_cast<double>(c.total());
  const double log_type = log_type_class_size(c);
  RazorBound r;
  r.evidence_scaled = integrate_prior(m, prior, density, [&](const Vector& t) {
    return std::exp(log_type + log_sequence_probability(c.counts(), m.probabilities(t)));
  });
  r.kl_razor = integrate_prior(m, prior, density, [&](const Vector& t) {
    const Vector p = m.probabilities(t);
    return std::exp(-n * kl(p_hat.probs(), std::span<const double>(p.data(), static_cast<std::size_t>(p.size()))));
  });
  r.jsd_razor = integrate_prior(m, prior, density, [&](const Vector& t) {
    const Vector p = m.probabilities(t);
    return std::exp(-2.0 * n *
                    jsd(p_hat.probs(), std::span<const double>(p.data(), static_cast<std::size_t>(p.size()))));
  });
  return r;
}

void AcceptanceTable::write_csv(std::ostream& out) const {
  write_csv_record(out, {"epsilon", "integral", "limit_target"});
  for (const auto& row : rows)
    write_csv_record(out, {format_real(row.epsilon), format_real(row.integral), format_real(row.limit_target)});
}

std::vector<double> default_epsilon_grid(std::size_t k, std::int64_t n) {
  std::vector<Categorical> types;
  for_each_type(k, n, [&](const std::vector<std::int64_t>& c) { types.push_back(type_of(c)); });
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < types.size(); ++a)
    for (std::size_t b = a + 1; b < types.size(); ++b) {
      const double s = jsd_sqrt(types[a], types[b]);
      if (s > 0.0) smallest = std::min(smallest, s);
    }
  const double top = std::sqrt(std::numbers::ln2);
  const double bottom = std::isfinite(smallest) ? 0.5 * smallest : top;
  std::vector<double> grid(12);
  for (int i = 0; i < 12; ++i) grid[static_cast<std::size_t>(i)] = top * std::pow(bottom / top, i / 11.0);
  grid.front() = top;
  return grid;
}

AcceptanceTable acceptance_rate_limit(const ParametricModel& m, const CountVector& data, const PriorSpec& prior,
                                      std::span<const double> epsilon_grid) {
  check_prior(prior);
  check_model(m, data);
  const std::size_t k = data.k();
  const std::int64_t n = data.total();
  if (std::pow(static_cast<double>(k), static_cast<double>(n)) > 1e5)
    throw UnsupportedScale("k^n exceeds 1e5 outcome sequences");

  std::vector<double> grid(epsilon_grid.begin(), epsilon_grid.end());
  if (grid.empty()) grid = default_epsilon_grid(k, n);

  const auto density = prior_density(m, prior);
  const Categorical p_hat = empirical_from_counts(data);
  struct TypeTerm {
    std::vector<std::int64_t> counts;
    double log_size;
    double root_jsd;
    double weight;
  };
  std::vector<TypeTerm> terms;
  for_each_type(k, n, [&](const std::vector<std::int64_t>& c) {
    TypeTerm t;
    t.counts = c;
    t.log_size = log_type_class_size(CountVector(c));
    t.root_jsd = jsd_sqrt(p_hat, type_of(c));
    t.weight = integrate_prior(m, prior, density, [&](const Vector& theta) {
      return std::exp(t.log_size + log_sequence_probability(c, m.probabilities(theta)));
    });
    terms.push_back(std::move(t));
  });

  AcceptanceTable table;
  table.limit_target = std::exp(log_type_class_size(data)) * model_evidence(m, data, prior);
  for (double eps : grid) {
    CompensatedSum sum;
    for (const auto& t : terms)
      if (t.root_jsd <= eps) sum.add(t.weight);
    table.rows.push_back({eps, sum.value(), table.limit_target});
  }

  const double eps_min = *std::min_element(grid.begin(), grid.end());
  const double log_size_d = log_type_class_size(data);
  const auto check_at = [&](const Vector& theta) {
    const Vector p = m.probabilities(theta);
    CompensatedSum accepted;
    for (const auto& t : terms)
      if (t.root_jsd <= eps_min) accepted.add(std::exp(t.log_size + log_sequence_probability(t.counts, p)));
    const double scaled = accepted.value() * std::exp(-log_size_d);
    const double direct = std::exp(log_sequence_probability(data.counts(), p));
    table.corollary_max_error = std::max(table.corollary_max_error, std::abs(scaled - direct));
  };
  if (m.d() == 0) {
    check_at(Vector(0));
  } else {
    const std::size_t d = m.d();
    std::vector<int> idx(d, 0);
    Vector u(static_cast<Eigen::Index>(d));
    while (true) {
      for (std::size_t s = 0; s < d; ++s) u[static_cast<Eigen::Index>(s)] = (idx[s] + 0.5) / 5.0;
      check_at(m.box().from_unit(u));
      std::size_t s = 0;
      while (s < d && ++idx[s] == 5) idx[s++] = 0;
      if (s == d) break;
    }
  }
  return table;
}

}  // namespace jsdrazor
