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

#include "jsdrazor/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <numbers>
#include <thread>

#include "jsdrazor/csv.hpp"
#include "jsdrazor/divergence.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/simulators.hpp"

#ifndef JSDRAZOR_VERSION
#define JSDRAZOR_VERSION "0.0.0"
#endif

namespace jsdrazor {

std::string_view version() { return JSDRAZOR_VERSION; }

const RateRow& ExperimentResult::rate(std::size_t setting, std::size_t n_obs_index, Criterion c) const {
  for (const auto& r : rates)
    if (r.setting == setting && r.n_obs_index == n_obs_index && r.criterion == c) return r;
  throw ConfigError("no rate row for the requested cell");
}

namespace {

constexpr std::uint64_t kMainEffectTag = 0xE2;

struct Candidates {
  std::vector<ParametricModel> models;
  std::vector<std::shared_ptr<const Simulator>> simulators;
  std::vector<std::string> names;
  std::vector<std::size_t> dims;
  // Data generators for NFDS settings, indexed like the settings.
  std::vector<std::shared_ptr<const NFDSSimulator>> nfds_truth;
};

Candidates build_candidates(const ExperimentConfig& cfg) {
  Candidates c;
  switch (cfg.kind) {
    case ExperimentKind::NestedMultilogit:
      for (std::size_t d = 0; d <= 2; ++d) c.models.push_back(nested_example_model(d));
      break;
    case ExperimentKind::Loglinear:
      c.models.push_back(loglinear_model(LoglinearVariant::TwoParameter));
      c.models.push_back(loglinear_model(LoglinearVariant::Saturated));
      break;
    case ExperimentKind::Custom:
      for (const auto& m : cfg.custom_models) c.models.push_back(multilogit_model(m.predictors, m.active_dims, m.box, m.name));
      break;
    case ExperimentKind::NFDS: {
      const ClusterData data = cfg.nfds.clusters_csv.empty() ? synthetic_cluster_data(cfg.nfds.synthetic_seed)
                                                             : read_cluster_csv(cfg.nfds.clusters_csv);
      NFDSConfig nc = nfds_config_from_data(data, cfg.nfds.n_loci, cfg.nfds.loci_seed);
      nc.pop_size = cfg.nfds.pop_size;
      nc.generations_per_obs = cfg.nfds.generations_per_obs;
      nc.obs_times = cfg.nfds.obs_times;
      nc.validate();
      for (NFDSVariant v : {NFDSVariant::Neutral, NFDSVariant::Homogeneous, NFDSVariant::Heterogeneous}) {
        auto sim = std::make_shared<NFDSSimulator>(nc, v);
        c.simulators.push_back(sim);
        c.names.push_back(sim->name());
        c.dims.push_back(sim->d());
      }
      for (const auto& s : cfg.settings) {
        const std::size_t idx = s.model == "nfds-neutral" ? 0 : s.model == "nfds-homogeneous" ? 1 : 2;
        c.nfds_truth.push_back(std::static_pointer_cast<const NFDSSimulator>(c.simulators[idx]));
      }
      return c;
    }
  }
  for (const auto& m : c.models) {
    c.simulators.push_back(multilogit_simulator(m));
    c.names.push_back(m.name());
    c.dims.push_back(m.d());
  }
  return c;
}

std::string join_reals(const Vector& v, bool full) {
  std::string s;
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    if (full) {
      s += format_real(v[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%g", v[i]);
      s += buf;
    }
  }
  return s;
}

std::string setting_label(const ExperimentConfig& cfg, const TrueSetting& s) {
  switch (cfg.kind) {
    case ExperimentKind::Loglinear: return "lambda_xy=" + join_reals(s.theta, false);
    case ExperimentKind::NFDS: {
      char buf[160];
      std::snprintf(buf, sizeof buf, "m=%g;v=%g;sigma_f=%g;sigma_w=%g;p_f=%g", s.theta[0], s.theta[1], s.theta[2],
                    s.theta[3], s.theta[4]);
      return buf;
    }
    default: return "theta=" + join_reals(s.theta, false);
  }
}

Vector replicate_theta(const ExperimentConfig& cfg, const TrueSetting& s, int replicate) {
  if (cfg.kind != ExperimentKind::Loglinear) return s.theta;
  Rng rng(derive_seed(cfg.master_seed, kMainEffectTag, static_cast<std::uint64_t>(replicate)));
  const double r = cfg.main_effect_range;
  const double lx = -r + 2.0 * r * rng.uniform();
  const double ly = -r + 2.0 * r * rng.uniform();
  return (Vector(3) << lx, ly, s.theta[0]).finished();
}

CountVector simulate_data(const ExperimentConfig& cfg, const Candidates& c, std::size_t setting, const Vector& theta,
                          std::int64_t n, std::uint64_t seed) {
  switch (cfg.kind) {
    case ExperimentKind::Loglinear:
      return sample_multinomial(loglinear_model(LoglinearVariant::Saturated).categorical(theta), n, seed);
    case ExperimentKind::NFDS:
      return c.nfds_truth[setting]->run_natural(cfg.nfds.params[setting], n, seed);
    default: {
      const auto& name = cfg.settings[setting].model;
      for (const auto& m : c.models)
        if (m.name() == name) {
          if (cfg.kind == ExperimentKind::NestedMultilogit) return sample_multinomial(m.categorical(theta.head(m.d())), n, seed);
          return sample_multinomial(m.categorical(theta), n, seed);
        }
      throw ConfigError("unknown true model " + name);
    }
  }
}

// Expected discrepancy of a parameter-free simulator, averaged over the budget.
FitResult constant_model_fit(const Simulator& sim, const CountVector& data, const BolfiSettings& b, std::uint64_t seed) {
  const auto blocks = observed_blocks(sim, data);
  const std::int64_t n = b.n_per_sim > 0 ? b.n_per_sim : data.total();
  double sum = 0.0;
  for (int i = 0; i < b.budget; ++i)
    sum += discrepancy(sim, Vector(0), blocks, n, b.reps, derive_seed(seed, static_cast<std::uint64_t>(i)));
  FitResult f;
  f.theta_hat = Vector(0);
  f.objective = std::clamp(sum / b.budget, 0.0, std::numbers::ln2);
  f.evaluations = b.budget;
  f.converged = true;
  f.restarts_used = 1;
  return f;
}

struct Outcome {
  std::vector<SelectionRow> rows;
  std::int64_t razor_instances = 0;
  std::int64_t razor_violations = 0;
};

Outcome run_replicate(const ExperimentConfig& cfg, const Candidates& c, std::size_t setting, std::size_t n_index,
                      int replicate) {
  const std::int64_t n = cfg.n_obs[n_index];
  const auto cell = static_cast<std::uint64_t>(setting * cfg.n_obs.size() + n_index);
  const auto rep = static_cast<std::uint64_t>(replicate);
  const Vector theta = replicate_theta(cfg, cfg.settings[setting], replicate);
  const CountVector data = simulate_data(cfg, c, setting, theta, n, derive_seed(cfg.master_seed, cell, rep, 0));
  const std::size_t m_count = c.names.size();
  const double two_n = 2.0 * static_cast<double>(n);

  struct Scores {
    std::vector<double> score, objective;
  };
  std::map<Criterion, Scores> by;
  for (Criterion k : cfg.criteria) by[k] = Scores{std::vector<double>(m_count), std::vector<double>(m_count)};

  Outcome out;
  const bool exact = cfg.wants(Criterion::SicJsd) || cfg.wants(Criterion::Sic) || cfg.wants(Criterion::Refined) ||
                     cfg.wants(Criterion::Laplace);
  if (exact) {
    const Categorical p_hat = empirical_from_counts(data);
    for (std::size_t i = 0; i < m_count; ++i) {
      const ParametricModel& m = c.models[i];
      const FitResult jfit = min_jsd_fit(m, p_hat, cfg.optimizer, derive_seed(cfg.master_seed, cell, rep, 1, i));
      std::optional<double> sj;
      if (cfg.wants(Criterion::SicJsd)) {
        sj = sic_jsd(m, data, jfit);
        by[Criterion::SicJsd].score[i] = *sj;
        by[Criterion::SicJsd].objective[i] = jfit.objective;
      }
      if (cfg.wants(Criterion::Sic)) {
        const FitResult mfit = mle_fit(m, data, cfg.optimizer, derive_seed(cfg.master_seed, cell, rep, 2, i));
        const double s = sic(m, data, mfit);
        by[Criterion::Sic].score[i] = s;
        by[Criterion::Sic].objective[i] = mfit.objective;
        if (sj) {
          ++out.razor_instances;
          if (!(*sj < s)) ++out.razor_violations;
        }
      }
      if (cfg.wants(Criterion::Refined)) {
        by[Criterion::Refined].score[i] = two_n * jfit.objective + refined_penalty(m, data, jfit, cfg.quadrature).value;
        by[Criterion::Refined].objective[i] = jfit.objective;
      }
      if (cfg.wants(Criterion::Laplace)) {
        double v = std::numeric_limits<double>::infinity();
        try {
          v = razor_laplace(m, data, jfit, cfg.quadrature);
        } catch (const Error&) {
        }
        by[Criterion::Laplace].score[i] = v;
        by[Criterion::Laplace].objective[i] = jfit.objective;
      }
    }
  }
  if (cfg.wants(Criterion::SicBolfi)) {
    for (std::size_t i = 0; i < m_count; ++i) {
      const Simulator& sim = *c.simulators[i];
      const std::uint64_t seed = derive_seed(cfg.master_seed, cell, rep, 3, i);
      const FitResult fit =
          sim.d() == 0 ? constant_model_fit(sim, data, cfg.bolfi, seed) : bolfi_minimize(sim, data, cfg.bolfi, seed).fit;
      by[Criterion::SicBolfi].score[i] = sic_bolfi(fit, sim.d(), n);
      by[Criterion::SicBolfi].objective[i] = fit.objective;
    }
  }
  for (Criterion k : cfg.criteria) {
    SelectionRow row;
    row.setting = setting;
    row.n_obs_index = n_index;
    row.replicate = replicate;
    row.criterion = k;
    row.true_theta = theta;
    row.scores = by[k].score;
    row.objectives = by[k].objective;
    row.selected = argmin_with_tiebreak(row.scores, c.dims);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Candidates c = build_candidates(cfg);

  ExperimentResult result;
  result.model_names = c.names;
  result.dims = c.dims;
  result.n_obs = cfg.n_obs;
  for (const auto& s : cfg.settings) {
    result.setting_labels.push_back(setting_label(cfg, s));
    const auto it = std::find(c.names.begin(), c.names.end(), s.model);
    if (it == c.names.end()) throw ConfigError("true model " + s.model + " is not a candidate");
    result.true_model.push_back(static_cast<std::size_t>(it - c.names.begin()));
  }

  const std::size_t cells = cfg.settings.size() * cfg.n_obs.size();
  const std::size_t total = cells * static_cast<std::size_t>(cfg.replicates);
  std::vector<Outcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
  std::mutex mu;
  const auto worker = [&] {
    while (true) {
      const std::size_t unit = next.fetch_add(1);
      if (unit >= total) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const std::size_t cell = unit / static_cast<std::size_t>(cfg.replicates);
      const int r = static_cast<int>(unit % static_cast<std::size_t>(cfg.replicates));
      try {
        outcomes[unit] = run_replicate(cfg, c, cell / cfg.n_obs.size(), cell % cfg.n_obs.size(), r);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
      const std::size_t finished = ++done;
      if (options.progress) {
        std::lock_guard lock(mu);
        options.progress(finished, total);
      }
    }
  };
  const int jobs = std::max(options.jobs, 1);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& o : outcomes) {
    result.razor_instances += o.razor_instances;
    result.razor_violations += o.razor_violations;
    for (auto& row : o.rows) result.selections.push_back(std::move(row));
  }

  const std::size_t m_count = c.names.size();
  for (std::size_t s = 0; s < cfg.settings.size(); ++s)
    for (std::size_t ni = 0; ni < cfg.n_obs.size(); ++ni)
      for (Criterion k : cfg.criteria) {
        RateRow rate;
        rate.setting = s;
        rate.n_obs_index = ni;
        rate.criterion = k;
        rate.replicates = cfg.replicates;
        std::vector<std::int64_t> chosen(m_count, 0);
        for (const auto& row : result.selections)
          if (row.setting == s && row.n_obs_index == ni && row.criterion == k) ++chosen[row.selected];
        for (std::size_t i = 0; i < m_count; ++i)
          rate.rates.push_back(static_cast<double>(chosen[i]) / static_cast<double>(cfg.replicates));
        rate.true_model_rate = rate.rates[result.true_model[s]];
        result.rates.push_back(std::move(rate));
      }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_selections_csv(std::ostream& out, const ExperimentResult& result, const ExperimentConfig& cfg) {
  std::vector<std::string> header{"experiment", "setting", "true_model", "true_params", "n_obs", "replicate",
                                  "criterion", "selected_model", "correct"};
  for (const auto& m : result.model_names) header.push_back("chose_" + m);
  for (const auto& m : result.model_names) header.push_back("score_" + m);
  for (const auto& m : result.model_names) header.push_back("objective_" + m);
  write_csv_record(out, header);
  for (const auto& row : result.selections) {
    const std::size_t truth = result.true_model[row.setting];
    std::vector<std::string> f{cfg.name,
                               result.setting_labels[row.setting],
                               result.model_names[truth],
                               join_reals(row.true_theta, true),
                               std::to_string(result.n_obs[row.n_obs_index]),
                               std::to_string(row.replicate),
                               std::string(to_string(row.criterion)),
                               result.model_names[row.selected],
                               row.selected == truth ? "1" : "0"};
    for (std::size_t i = 0; i < result.model_names.size(); ++i) f.push_back(row.selected == i ? "1" : "0");
    for (double s : row.scores) f.push_back(format_real(s));
    for (double s : row.objectives) f.push_back(format_real(s));
    write_csv_record(out, f);
  }
}

void write_rates_csv(std::ostream& out, const ExperimentResult& result, const ExperimentConfig& cfg) {
  std::vector<std::string> header{"experiment", "setting", "true_model", "n_obs", "criterion", "replicates"};
  for (const auto& m : result.model_names) header.push_back("rate_" + m);
  header.push_back("true_model_rate");
  write_csv_record(out, header);
  for (const auto& r : result.rates) {
    std::vector<std::string> f{cfg.name,
                               result.setting_labels[r.setting],
                               result.model_names[result.true_model[r.setting]],
                               std::to_string(result.n_obs[r.n_obs_index]),
                               std::string(to_string(r.criterion)),
                               std::to_string(r.replicates)};
    for (double x : r.rates) f.push_back(format_real(x));
    f.push_back(format_real(r.true_model_rate));
    write_csv_record(out, f);
  }
}

void write_experiment_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("selections.csv");
    write_selections_csv(f, result, cfg);
  }
  {
    auto f = open("rates.csv");
    write_rates_csv(f, result, cfg);
  }
  nlohmann::json report;
  report["tool"] = "jsdrazor";
  report["version"] = std::string(version());
  report["config"] = to_yaml(cfg);
  report["models"] = result.model_names;
  report["dims"] = result.dims;
  report["settings"] = result.setting_labels;
  report["n_obs"] = result.n_obs;
  report["replicates"] = cfg.replicates;
  report["wall_seconds"] = result.wall_seconds;
  report["razor_inequality"] = {{"instances", result.razor_instances}, {"violations", result.razor_violations}};
  nlohmann::json rates = nlohmann::json::array();
  for (const auto& r : result.rates)
    rates.push_back({{"setting", result.setting_labels[r.setting]},
                     {"n_obs", result.n_obs[r.n_obs_index]},
                     {"criterion", std::string(to_string(r.criterion))},
                     {"rates", r.rates},
                     {"true_model_rate", r.true_model_rate}});
  report["rates"] = rates;
  auto f = open("report.json");
  f << report.dump(2) << '\n';
}

}  // namespace jsdrazor
