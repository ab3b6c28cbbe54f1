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

#include "jsdrazor/razor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "jsdrazor/csv.hpp"
#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/quadrature.hpp"

namespace jsdrazor {

namespace {
constexpr double kPi = std::numbers::pi;

double fitted_jsd(const ParametricModel& m, const CountVector& c, const FitResult& fit) {
  const Categorical p_hat = empirical_from_counts(c);
  const Vector p = m.probabilities(fit.theta_hat);
  return jsd(p_hat.probs(), std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

void check_sample(std::int64_t n) {
  if (n <= 25) throw SampleTooSmall("SIC-JSD needs n > 8 pi, got n = " + std::to_string(n));
}
}  // namespace

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::SicJsd: return "sic_jsd";
    case Criterion::Sic: return "sic";
    case Criterion::Refined: return "refined";
    case Criterion::Laplace: return "laplace";
    case Criterion::SicBolfi: return "sic_bolfi";
  }
  return "?";
}

Criterion parse_criterion(std::string_view name) {
  for (Criterion c : {Criterion::SicJsd, Criterion::Sic, Criterion::Refined, Criterion::Laplace,
                      Criterion::SicBolfi})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown criterion '" + std::string(name) + "'");
}

double sic_jsd_penalty(std::size_t d, std::int64_t n) {
  check_sample(n);
  return 0.5 * static_cast<double>(d) * std::log(static_cast<double>(n) / (8.0 * kPi));
}

double sic_jsd(const ParametricModel& m, const CountVector& c, const FitResult& fit) {
  check_sample(c.total());
  return 2.0 * static_cast<double>(c.total()) * fitted_jsd(m, c, fit) + sic_jsd_penalty(m.d(), c.total());
}

double sic(const ParametricModel& m, const CountVector& c, const FitResult& mle) {
  if (c.total() < 2) throw SampleTooSmall("SIC needs n >= 2");
  return mle.objective + 0.5 * static_cast<double>(m.d()) * std::log(static_cast<double>(c.total()));
}

VolumeResult model_volume(const ParametricModel& m, const QuadratureSettings& q) {
  VolumeResult r;
  if (m.d() == 0) return r;
  if (m.d() > 3) throw UnsupportedDimension("volume quadrature supports d <= 3");
  const auto integrand = [&](const Vector& t) { return std::sqrt(std::max(determinant(fisher_info(m, t)), 0.0)); };
  r.volume = integrate_box(integrand, m.box(), q.nodes);
  const double coarse = integrate_box(integrand, m.box(), std::max(q.nodes / 2, 1));
  r.richardson_error = std::abs(r.volume - coarse);
  r.quadrature_warning = r.richardson_error > 1e-4;
  return r;
}

RefinedPenalty refined_penalty(const ParametricModel& m, const CountVector& c, const FitResult&,
                               const QuadratureSettings& q) {
  RefinedPenalty r;
  if (m.d() == 0) return r;
  const VolumeResult v = model_volume(m, q);
  const double d = static_cast<double>(m.d());
  r.log_volume = std::log(v.volume);
  r.quadrature_warning = v.quadrature_warning;
  r.value = 0.5 * d * std::log(static_cast<double>(c.total()) / (2.0 * kPi)) + r.log_volume - d * std::numbers::ln2;
  return r;
}

double razor_laplace(const ParametricModel& m, const CountVector& c, const FitResult& fit,
                     const QuadratureSettings& q) {
  const double n = static_cast<double>(c.total());
  const double fit_term = 2.0 * n * fitted_jsd(m, c, fit);
  if (m.d() == 0) return fit_term;
  const Categorical p_hat = empirical_from_counts(c);
  const SquareMatrix h = jsd_hessian(p_hat, m, fit.theta_hat);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw HessianNotPD("JSD Hessian is not positive definite at theta_hat");
  const double det_i = determinant(fisher_info(m, fit.theta_hat));
  const double det_h = eig.eigenvalues().prod();
  const double d = static_cast<double>(m.d());
  return fit_term + 0.5 * d * std::log(n / (2.0 * kPi)) + std::log(model_volume(m, q).volume) +
         0.5 * std::log(det_h / det_i);
}

const std::vector<double>& ScoreReport::values(Criterion c) const {
  switch (c) {
    case Criterion::SicJsd: return sic_jsd;
    case Criterion::Sic: return sic;
    case Criterion::Refined: return refined;
    case Criterion::Laplace: return laplace;
    case Criterion::SicBolfi: return sic_bolfi;
  }
  return sic_jsd;
}

std::size_t argmin_with_tiebreak(std::span<const double> values, std::span<const std::size_t> dims) {
  if (values.empty()) throw ConfigError("no candidate models to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double diff = values[i] - values[best];
    if (diff < -1e-12 || (std::abs(diff) <= 1e-12 && dims[i] < dims[best])) best = i;
  }
  return best;
}

ScoreReport select(std::span<const ModelScore> scores, std::int64_t n_o, Criterion primary) {
  if (scores.empty()) throw ConfigError("no candidate models to select from");
  ScoreReport r;
  r.criterion = primary;
  r.n_o = n_o;
  const auto collect = [&](std::vector<double>& out, std::optional<double> ModelScore::*field) {
    std::size_t have = 0;
    for (const auto& s : scores) have += (s.*field).has_value();
    if (have == 0) return;
    if (have != scores.size()) throw ConfigError("criterion computed for only some models");
    for (const auto& s : scores) out.push_back(*(s.*field));
  };
  for (const auto& s : scores) {
    r.model_names.push_back(s.name);
    r.dims.push_back(s.d);
    r.fits.push_back(s.fit);
  }
  collect(r.sic_jsd, &ModelScore::sic_jsd);
  collect(r.sic, &ModelScore::sic);
  collect(r.refined, &ModelScore::refined);
  collect(r.laplace, &ModelScore::laplace);
  collect(r.sic_bolfi, &ModelScore::sic_bolfi);
  const auto& v = r.values(primary);
  if (v.empty()) throw ConfigError("primary criterion " + std::string(to_string(primary)) + " was not computed");
  r.selected_index = argmin_with_tiebreak(v, r.dims);
  return r;
}

ScoreReport score_models(std::span<const ParametricModel> models, const CountVector& c,
                         std::span<const Criterion> criteria, Criterion primary,
                         const OptimizerSettings& settings, std::uint64_t seed, const QuadratureSettings& q) {
  const auto wants = [&](Criterion x) { return x == primary || std::find(criteria.begin(), criteria.end(), x) != criteria.end(); };
  if (wants(Criterion::SicBolfi)) throw ConfigError("sic_bolfi needs a simulator; use bolfi_minimize");
  const Categorical p_hat = empirical_from_counts(c);
  std::vector<ModelScore> scores;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const ParametricModel& m = models[i];
    ModelScore s;
    s.name = m.name();
    s.d = m.d();
    s.fit = min_jsd_fit(m, p_hat, settings, derive_seed(seed, i));
    const double fit_term = 2.0 * static_cast<double>(c.total()) * s.fit.objective;
    if (wants(Criterion::SicJsd)) s.sic_jsd = sic_jsd(m, c, s.fit);
    if (wants(Criterion::Sic)) s.sic = sic(m, c, mle_fit(m, c, settings, derive_seed(seed, i, 1)));
    if (wants(Criterion::Refined)) s.refined = fit_term + refined_penalty(m, c, s.fit, q).value;
    if (wants(Criterion::Laplace)) s.laplace = razor_laplace(m, c, s.fit, q);
    scores.push_back(std::move(s));
  }
  return select(scores, c.total(), primary);
}

namespace {
void write_list(std::ostringstream& o, const char* key, const std::vector<double>& v) {
  o << "  \"" << key << "\": ";
  if (v.empty()) {
    o << "null,\n";
    return;
  }
  o << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o << ", ";
    o << (std::isfinite(v[i]) ? format_real(v[i]) : std::string("null"));
  }
  o << "],\n";
}

std::vector<double> read_list(const nlohmann::json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key) || j[key].is_null()) return out;
  for (const auto& x : j[key]) out.push_back(x.is_null() ? std::nan("") : x.get<double>());
  return out;
}
}  // namespace

std::string to_json(const ScoreReport& r) {
  std::ostringstream o;
  o << "{\n  \"model_names\": [";
  for (std::size_t i = 0; i < r.model_names.size(); ++i)
    o << (i ? ", " : "") << nlohmann::json(r.model_names[i]).dump();
  o << "],\n  \"dims\": [";
  for (std::size_t i = 0; i < r.dims.size(); ++i) o << (i ? ", " : "") << r.dims[i];
  o << "],\n";
  write_list(o, "sic_jsd", r.sic_jsd);
  write_list(o, "sic", r.sic);
  write_list(o, "refined", r.refined);
  write_list(o, "laplace", r.laplace);
  write_list(o, "sic_bolfi", r.sic_bolfi);
  o << "  \"fits\": [";
  for (std::size_t i = 0; i < r.fits.size(); ++i) {
    const FitResult& f = r.fits[i];
    o << (i ? ",\n    " : "\n    ") << "{\"theta_hat\": [";
    for (Eigen::Index s = 0; s < f.theta_hat.size(); ++s) o << (s ? ", " : "") << format_real(f.theta_hat[s]);
    o << "], \"objective\": " << format_real(f.objective) << ", \"evaluations\": " << f.evaluations
      << ", \"converged\": " << (f.converged ? "true" : "false") << ", \"restarts_used\": " << f.restarts_used
      << '}';
  }
  o << (r.fits.empty() ? "],\n" : "\n  ],\n");
  o << "  \"criterion\": \"" << to_string(r.criterion) << "\",\n";
  o << "  \"selected_index\": " << r.selected_index << ",\n";
  o << "  \"n_o\": " << r.n_o << "\n}\n";
  return o.str();
}

ScoreReport score_report_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("score report: ") + e.what());
  }
  try {
    ScoreReport r;
    r.model_names = j.at("model_names").get<std::vector<std::string>>();
    r.dims = j.at("dims").get<std::vector<std::size_t>>();
    r.sic_jsd = read_list(j, "sic_jsd");
    r.sic = read_list(j, "sic");
    r.refined = read_list(j, "refined");
    r.laplace = read_list(j, "laplace");
    r.sic_bolfi = read_list(j, "sic_bolfi");
    for (const auto& f : j.at("fits")) {
      FitResult fit;
      const auto theta = f.at("theta_hat").get<std::vector<double>>();
      fit.theta_hat = Eigen::Map<const Vector>(theta.data(), static_cast<Eigen::Index>(theta.size()));
      fit.objective = f.at("objective").get<double>();
      fit.evaluations = f.at("evaluations").get<int>();
      fit.converged = f.at("converged").get<bool>();
      fit.restarts_used = f.at("restarts_used").get<int>();
      r.fits.push_back(std::move(fit));
    }
    r.criterion = parse_criterion(j.at("criterion").get<std::string>());
    r.selected_index = j.at("selected_index").get<std::size_t>();
    r.n_o = j.at("n_o").get<std::int64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("score report: ") + e.what());
  }
}

}  // namespace jsdrazor
