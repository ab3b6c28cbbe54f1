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

#include "jsdrazor/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "jsdrazor/divergence.hpp"
#include "jsdrazor/estimate.hpp"
#include "jsdrazor/evidence.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/razor.hpp"
#include "jsdrazor/rng.hpp"

namespace jsdrazor {

namespace {

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> random_simplex(std::size_t k, Rng& rng, double zero_prob) {
  std::vector<double> p(k);
  double sum = 0.0;
  for (auto& x : p) {
    x = rng.uniform() < zero_prob ? 0.0 : -std::log1p(-rng.uniform());
    sum += x;
  }
  if (sum <= 0.0) {
    p[rng.below(k)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= sum;
  return p;
}

Vector uniform_in(const Box& box, Rng& rng) {
  Vector u(static_cast<Eigen::Index>(box.dim()));
  for (auto& x : u) x = rng.uniform();
  return box.from_unit(u);
}

ParametricModel one_parameter_family(double a, double b) {
  Matrix alpha(2, 2);
  alpha << 1, 0, 0, 1;
  return multilogit_model(alpha, 1, Box(Vector::Constant(1, a), Vector::Constant(1, b)), "M1");
}

ParametricModel binary_family() {
  Matrix alpha(1, 1);
  alpha << 1;
  return multilogit_model(alpha, 1, Box::cube(1, -3.0, 3.0), "B1");
}

// Probabilities only, so derivatives fall back to finite differences.
ParametricModel without_derivatives(const ParametricModel& m) {
  return ParametricModel(m.name(), m.k(), m.box(), [m](const Vector& t) { return m.probabilities(t); });
}

SquareMatrix closed_form_fisher_2(const Vector& t) {
  const double e1 = std::exp(t[0]);
  const double e2 = std::exp(t[1]);
  const double s = std::pow(1.0 + e1 + e2, -3.0);
  SquareMatrix i(2, 2);
  i(0, 0) = s * e1 * (e1 + (1.0 + e2) * (1.0 + e2) + e1 * e2);
  i(0, 1) = i(1, 0) = -s * e1 * e2 * (1.0 + e1 + e2);
  i(1, 1) = s * e2 * (e2 + (1.0 + e1) * (1.0 + e1) + e1 * e2);
  return i;
}

double closed_form_fisher_1(double t) {
  const double e = std::exp(t);
  return 2.0 * e / ((2.0 + e) * (2.0 + e));
}

double arctan_volume(double a, double b) {
  return 2.0 * (std::atan(std::exp(b / 2.0) / std::numbers::sqrt2) - std::atan(std::exp(a / 2.0) / std::numbers::sqrt2));
}

void finish(PropertyResult& r, const Timer& t) {
  r.passed = r.violations == 0;
  r.seconds = t.seconds();
}

}  // namespace

PropertyResult check_divergence_properties(int pairs, std::uint64_t seed) {
  const Timer timer;
  PropertyResult r;
  r.name = "divergence bounds";
  Rng rng(seed);
  const double ln2 = std::numbers::ln2;
  double worst = std::numeric_limits<double>::infinity();
  std::int64_t range_bad = 0, kl_bad = 0, tri_bad = 0, l2_bad = 0;
  for (int i = 0; i < pairs; ++i) {
    const std::size_t k = 2 + rng.below(9);
    const auto p = random_simplex(k, rng, 0.15);
    const auto q = random_simplex(k, rng, 0.15);
    const auto s = random_simplex(k, rng, 0.15);
    const double pq = jsd(p, q);
    const double qs = jsd(q, s);
    const double ps = jsd(p, s);

    const double range_slack = std::min(pq, ln2 - pq);
    if (range_slack < 0.0) ++range_bad;
    worst = std::min(worst, range_slack);

    const double kl_pq = kl(p, q);
    if (std::isfinite(kl_pq)) {
      const double slack = 0.5 * kl_pq - pq;
      if (slack < -1e-12 * std::max(1.0, kl_pq)) ++kl_bad;
      worst = std::min(worst, slack);
    }

    const double tri = std::sqrt(pq) + std::sqrt(qs) - std::sqrt(ps);
    if (tri < -1e-12) ++tri_bad;
    worst = std::min(worst, tri);

    double l2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) l2 += (p[j] - q[j]) * (p[j] - q[j]);
    const double lower = std::numbers::sqrt2 / 4.0 * std::sqrt(l2);
    const double l2_slack = std::sqrt(pq) - lower;
    if (l2_slack < -1e-12) ++l2_bad;
    worst = std::min(worst, l2_slack);
    r.checked += 4;
  }
  r.violations = range_bad + kl_bad + tri_bad + l2_bad;
  r.margin = worst;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d pairs; violations range=%lld half-KL=%lld triangle=%lld l2=%lld", pairs,
                static_cast<long long>(range_bad), static_cast<long long>(kl_bad), static_cast<long long>(tri_bad),
                static_cast<long long>(l2_bad));
  r.detail = buf;
  finish(r, timer);
  return r;
}

PropertyResult check_fisher_information(int points, std::uint64_t seed) {
  const Timer timer;
  PropertyResult r;
  r.name = "fisher information";
  Rng rng(seed);
  const ParametricModel m2 = without_derivatives(nested_example_model(2));
  const ParametricModel m1 = without_derivatives(nested_example_model(1));
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Vector t2 = uniform_in(m2.box(), rng);
    const double e2 = (fisher_info(m2, t2) - closed_form_fisher_2(t2)).cwiseAbs().maxCoeff();
    const Vector t1 = uniform_in(m1.box(), rng);
    const double e1 = std::abs(fisher_info(m1, t1)(0, 0) - closed_form_fisher_1(t1[0]));
    worst = std::max({worst, e1, e2});
    r.checked += 2;
    if (e1 > 1e-8) ++r.violations;
    if (e2 > 1e-8) ++r.violations;
  }
  const double at_zero = std::abs(fisher_info(nested_example_model(1), Vector::Zero(1))(0, 0) - 2.0 / 9.0);
  ++r.checked;
  if (at_zero > 1e-12) ++r.violations;
  r.margin = std::min(1e-8 - worst, 1e-12 - at_zero);
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |numeric - closed form| = %.3g; |I(0) - 2/9| = %.3g", worst, at_zero);
  r.detail = buf;
  finish(r, timer);
  return r;
}

PropertyResult check_jsd_derivatives(int points, std::uint64_t seed) {
  const Timer timer;
  PropertyResult r;
  r.name = "jsd derivatives";
  Rng rng(seed);
  const std::vector<ParametricModel> models{nested_example_model(2), loglinear_model(LoglinearVariant::Saturated)};
  double grad_err = 0.0, hess_err = 0.0, fisher_err = 0.0;
  for (int i = 0; i < points; ++i) {
    const ParametricModel& m = models[static_cast<std::size_t>(i) % models.size()];
    const Box inner(m.box().lower() * 0.8, m.box().upper() * 0.8);
    const Vector t = uniform_in(inner, rng);
    const Categorical p_hat(random_simplex(m.k(), rng, 0.0));
    const auto d = static_cast<Eigen::Index>(m.d());

    const Vector g = jsd_gradient(p_hat, m, t);
    const SquareMatrix h = jsd_hessian(p_hat, m, t);
    const double step = 1e-5;
    for (Eigen::Index j = 0; j < d; ++j) {
      Vector up = t, down = t;
      up[j] += step;
      down[j] -= step;
      const double fd = (jsd(p_hat, m.categorical(up)) - jsd(p_hat, m.categorical(down))) / (2.0 * step);
      grad_err = std::max(grad_err, std::abs(fd - g[j]));
      const Vector hd = (jsd_gradient(p_hat, m, up) - jsd_gradient(p_hat, m, down)) / (2.0 * step);
      hess_err = std::max(hess_err, (hd - h.col(j)).cwiseAbs().maxCoeff());
    }
    const SquareMatrix at_model = jsd_hessian(m.categorical(t), m, t);
    const SquareMatrix fisher = fisher_info(m, t);
    const double fe = (at_model - fisher / 4.0).cwiseAbs().maxCoeff() / std::max(1.0, fisher.cwiseAbs().maxCoeff());
    fisher_err = std::max(fisher_err, fe);
    r.checked += 3;
  }
  if (grad_err > 1e-6) ++r.violations;
  if (hess_err > 1e-5) ++r.violations;
  if (fisher_err > 1e-12) ++r.violations;
  r.margin = std::min({1e-6 - grad_err, 1e-5 - hess_err, 1e-12 - fisher_err});
  char buf[200];
  std::snprintf(buf, sizeof buf, "gradient err %.3g (tol 1e-6); hessian err %.3g (tol 1e-5); |H - I/4| %.3g (tol 1e-12)",
                grad_err, hess_err, fisher_err);
  r.detail = buf;
  finish(r, timer);
  return r;
}

PropertyResult check_model_volume(int intervals, std::uint64_t seed) {
  const Timer timer;
  PropertyResult r;
  r.name = "model volume";
  const double v = model_volume(one_parameter_family(-3.0, 3.0)).volume;
  const double ref = arctan_volume(-3.0, 3.0);
  const double err = std::abs(v - ref);
  ++r.checked;
  if (err > 1e-8) ++r.violations;
  double margin = 1e-8 - err;
  Rng rng(seed);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < intervals; ++i) {
    double a = -10.0 + 20.0 * rng.uniform();
    double b = -10.0 + 20.0 * rng.uniform();
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) b = a + 1e-3;
    const double vi = model_volume(one_parameter_family(a, b)).volume;
    ++r.checked;
    if (!(vi > 0.0 && vi < two_pi)) ++r.violations;
    margin = std::min({margin, vi, two_pi - vi});
  }
  r.margin = margin;
  char buf[160];
  std::snprintf(buf, sizeof buf, "V([-3,3]) = %.12f, closed form %.12f, error %.3g; %d random intervals in (0, 2pi)",
                v, ref, err, intervals);
  r.detail = buf;
  finish(r, timer);
  return r;
}

PropertyResult check_razor_inequality(int instances, std::uint64_t seed) {
  const Timer timer;
  PropertyResult r;
  r.name = "SIC-JSD below SIC";
  Rng rng(seed);
  const std::vector<ParametricModel> models{nested_example_model(0), nested_example_model(1), nested_example_model(2),
                                            loglinear_model(LoglinearVariant::TwoParameter),
                                            loglinear_model(LoglinearVariant::Saturated)};
  const ParametricModel truth_nested = nested_example_model(2);
  const ParametricModel truth_loglinear = loglinear_model(LoglinearVariant::Saturated);
  const OptimizerSettings opt;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const bool nested = i % 2 == 0;
    const ParametricModel& truth = nested ? truth_nested : truth_loglinear;
    const std::int64_t n = (i / 2) % 2 == 0 ? 100 : 1000;
    const Vector theta = uniform_in(Box(truth.box().lower() / 2.0, truth.box().upper() / 2.0), rng);
    const CountVector data = sample_multinomial(truth.categorical(theta), n, rng());
    const Categorical p_hat = empirical_from_counts(data);
    for (const auto& m : models) {
      if (m.k() != truth.k()) continue;
      const std::uint64_t s = rng();
      const double a = sic_jsd(m, data, min_jsd_fit(m, p_hat, opt, s));
      const double b = sic(m, data, mle_fit(m, data, opt, s));
      ++r.checked;
      if (!(a < b)) ++r.violations;
      margin = std::min(margin, b - a);
    }
  }
  r.margin = margin;
  r.detail = std::to_string(r.checked) + " fitted instances, smallest SIC - SIC-JSD = " + std::to_string(margin);
  finish(r, timer);
  return r;
}

PropertyResult check_evidence_chain(int instances, std::uint64_t seed) {
  const Timer timer;
  PropertyResult r;
  r.name = "evidence bound chain";
  Rng rng(seed);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const ParametricModel m = nested_example_model(1 + static_cast<std::size_t>(i % 2));
    const PriorSpec prior = (i / 2) % 2 == 0 ? PriorSpec::uniform(32) : PriorSpec::jeffreys(32);
    const std::int64_t n = 5 + static_cast<std::int64_t>(rng.below(46));
    const Vector theta = uniform_in(m.box(), rng);
    const CountVector data = sample_multinomial(m.categorical(theta), n, rng());
    const RazorBound b = razor_bound_check(m, data, prior);
    ++r.checked;
    if (!b.chain_holds()) ++r.violations;
    margin = std::min({margin, (b.kl_razor - b.evidence_scaled) / b.kl_razor, (b.jsd_razor - b.kl_razor) / b.jsd_razor});
  }
  r.margin = margin;
  r.detail = std::to_string(instances) + " instances; smallest relative gap " + std::to_string(margin);
  finish(r, timer);
  return r;
}

PropertyResult check_acceptance_limit() {
  const Timer timer;
  PropertyResult r;
  r.name = "ABC acceptance limit";
  const ParametricModel m = binary_family();
  const CountVector data(std::vector<std::int64_t>{2, 2});
  const AcceptanceTable table = acceptance_rate_limit(m, data, PriorSpec::uniform());
  const double limit_err = std::abs(table.rows.back().integral - table.limit_target);
  r.checked = 3;
  if (limit_err > 1e-10) ++r.violations;
  const double full_err = std::abs(table.rows.front().integral - 1.0);
  if (full_err > 1e-12) ++r.violations;
  bool monotone = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].integral > table.rows[i - 1].integral + 1e-15) monotone = false;
  if (!monotone) ++r.violations;
  r.margin = std::min(1e-10 - limit_err, 1e-12 - full_err);
  char buf[200];
  std::snprintf(buf, sizeof buf, "limit %.15g vs 6 * evidence %.15g (error %.3g); full acceptance error %.3g; %s",
                table.rows.back().integral, table.limit_target, limit_err, full_err,
                monotone ? "monotone in epsilon" : "NOT monotone");
  r.detail = buf;
  finish(r, timer);
  return r;
}

std::vector<PropertyResult> validate_theory(const ValidationOptions& o,
                                            const std::function<void(const PropertyResult&)>& on_result) {
  std::vector<PropertyResult> out;
  const auto add = [&](PropertyResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  add(check_divergence_properties(o.divergence_pairs, derive_seed(o.seed, 1)));
  add(check_fisher_information(o.calculus_points, derive_seed(o.seed, 2)));
  add(check_jsd_derivatives(o.calculus_points, derive_seed(o.seed, 3)));
  add(check_model_volume(o.volume_intervals, derive_seed(o.seed, 4)));
  add(check_razor_inequality(o.razor_instances, derive_seed(o.seed, 5)));
  add(check_evidence_chain(o.evidence_instances, derive_seed(o.seed, 6)));
  add(check_acceptance_limit());
  return out;
}

std::string format_property(const PropertyResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s %-22s checked=%lld violations=%lld margin=%.3g time=%.2fs", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), static_cast<long long>(r.checked), static_cast<long long>(r.violations), r.margin,
                r.seconds);
  return std::string(buf) + "\n     " + r.detail;
}

}  // namespace jsdrazor
