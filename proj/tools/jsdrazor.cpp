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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/config.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/experiment.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/razor.hpp"
#include "jsdrazor/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kPropertyFailure = 4;

jsdrazor::ExperimentConfig resolve_config(const std::string& arg) {
  if (std::filesystem::exists(arg)) return jsdrazor::load_experiment_config(arg);
  if (arg == "experiment1" || arg == "experiment2" || arg == "experiment3") return jsdrazor::preset_config(arg);
  throw jsdrazor::ConfigError("no such config file or preset: " + arg);
}

jsdrazor::ParametricModel named_model(const std::string& name) {
  if (name == "M0") return jsdrazor::nested_example_model(0);
  if (name == "M1") return jsdrazor::nested_example_model(1);
  if (name == "M2") return jsdrazor::nested_example_model(2);
  if (name == "LL2") return jsdrazor::loglinear_model(jsdrazor::LoglinearVariant::TwoParameter);
  if (name == "LL3") return jsdrazor::loglinear_model(jsdrazor::LoglinearVariant::Saturated);
  throw jsdrazor::ConfigError("unknown model '" + name + "' (expected M0, M1, M2, LL2 or LL3)");
}

jsdrazor::CountVector read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw jsdrazor::ConfigError("cannot open counts file " + path);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    last = line;
  }
  if (last.empty()) throw jsdrazor::ConfigError(path + ": no count row");
  try {
    return jsdrazor::parse_count_row(last);
  } catch (const jsdrazor::Error& e) {
    throw jsdrazor::ConfigError(path + ": " + e.what());
  }
}

int run_command(const std::string& config_arg, std::optional<std::uint64_t> seed, bool paper_scale, int jobs,
                const std::string& out, std::optional<int> replicates, bool quiet) {
  jsdrazor::ExperimentConfig cfg = resolve_config(config_arg);
  if (paper_scale) cfg.apply_paper_scale();
  if (seed) cfg.master_seed = *seed;
  if (replicates) cfg.replicates = *replicates;
  if (!out.empty()) cfg.output_dir = out;
  cfg.validate();

  jsdrazor::RunOptions options;
  options.jobs = jobs;
  if (!quiet)
    options.progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu/%zu replicates", done, total);
      if (done == total) std::fputc('\n', stderr);
    };
  const auto result = jsdrazor::run_experiment(cfg, options);
  jsdrazor::write_experiment_outputs(result, cfg, cfg.output_dir);

  for (const auto& r : result.rates) {
    std::printf("%-28s n=%-6lld %-9s true-model rate %.2f\n", result.setting_labels[r.setting].c_str(),
                static_cast<long long>(result.n_obs[r.n_obs_index]), std::string(to_string(r.criterion)).c_str(),
                r.true_model_rate);
  }
  std::printf("wrote %s (%.1f s)\n", cfg.output_dir.string().c_str(), result.wall_seconds);
  return kOk;
}

int validate_command(std::uint64_t seed) {
  jsdrazor::ValidationOptions options;
  options.seed = seed;
  bool ok = true;
  jsdrazor::validate_theory(options, [&](const jsdrazor::PropertyResult& r) {
    std::printf("%s\n", jsdrazor::format_property(r).c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  });
  return ok ? kOk : kPropertyFailure;
}

int score_command(const std::vector<std::string>& model_names, const std::string& counts_path,
                  const std::vector<std::string>& criteria_names, const std::string& primary_name,
                  std::uint64_t seed) {
  std::vector<jsdrazor::ParametricModel> models;
  for (const auto& n : model_names) models.push_back(named_model(n));
  std::vector<jsdrazor::Criterion> criteria;
  for (const auto& c : criteria_names) criteria.push_back(jsdrazor::parse_criterion(c));
  const jsdrazor::Criterion primary = jsdrazor::parse_criterion(primary_name);
  const auto counts = read_counts(counts_path);
  const auto report = jsdrazor::score_models(models, counts, criteria, primary, {}, seed);
  std::printf("%s\n", jsdrazor::to_json(report).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model selection for categorical data with Jensen-Shannon information criteria"};
  app.set_version_flag("--version", std::string(jsdrazor::version()));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
  int jobs = 1;
  std::string out;
  std::optional<int> replicates;
  bool quiet = false;
  std::string config_arg;
  auto* run = app.add_subcommand("run", "Run an experiment config (file path or preset name)");
  run->add_option("config", config_arg, "YAML/JSON config or experiment1|experiment2|experiment3")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_flag("--paper-scale", paper_scale, "Use the full replicate count and BOLFI budget");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output directory");
  run->add_option("--replicates", replicates, "Override the replicate count")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "No progress output");

  std::uint64_t validate_seed = jsdrazor::ValidationOptions{}.seed;
  auto* validate = app.add_subcommand("validate", "Run the theory property suites");
  validate->add_option("--seed", validate_seed, "Seed for random instances");

  std::vector<std::string> models;
  std::string counts;
  std::vector<std::string> criteria{"sic_jsd", "sic", "refined"};
  std::string primary = "sic_jsd";
  std::uint64_t score_seed = 1;
  auto* score = app.add_subcommand("score", "Score candidate models on a count vector");
  score->add_option("--model", models, "Candidate model (M0, M1, M2, LL2, LL3); repeatable")->required();
  score->add_option("--counts", counts, "CSV file whose last row holds the category counts")->required();
  score->add_option("--criteria", criteria, "Criteria to compute")->delimiter(',');
  score->add_option("--primary", primary, "Criterion used for selection");
  score->add_option("--seed", score_seed, "Optimizer seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return run_command(config_arg, seed, paper_scale, jobs, out, replicates, quiet);
    if (*validate) return validate_command(validate_seed);
    if (*score) return score_command(models, counts, criteria, primary, score_seed);
  } catch (const jsdrazor::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return kOk;
}
