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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "jsdrazor/config.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/experiment.hpp"
#include "jsdrazor/validate.hpp"

namespace jsdrazor {
namespace {

constexpr const char* kSmallNested = R"(experiment: nested_multilogit
name: small
master_seed: 11
replicates: 3
n_obs: [100, 400]
criteria: [sic, sic_jsd, refined]
true_params:
  - [0, 0]
  - [0.7, 0.7]
optimizer: {starts: 4}
)";

constexpr const char* kSmallLoglinear = R"(experiment: loglinear
name: small_ll
master_seed: 5
replicates: 2
n_obs: [200]
criteria: [sic_jsd, sic_bolfi]
lambda_xy: [0, 0.5]
bolfi: {budget: 30, init_points: 8}
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string selections(const ExperimentResult& r, const ExperimentConfig& cfg) {
  std::ostringstream out;
  write_selections_csv(out, r, cfg);
  return out.str();
}

TEST(Config, PresetsParseAndValidate) {
  for (const char* name : {"experiment1", "experiment2", "experiment3"}) {
    const ExperimentConfig cfg = preset_config(name);
    EXPECT_NO_THROW(cfg.validate()) << name;
    EXPECT_EQ(cfg.name, name);
  }
  EXPECT_THROW(preset_config("experiment4"), ConfigError);
}

TEST(Config, PresetsMatchShippedFiles) {
  const std::filesystem::path dir = JSDRAZOR_SOURCE_DIR "/configs";
  for (const char* name : {"experiment1", "experiment2", "experiment3"}) {
    const ExperimentConfig file = load_experiment_config(dir / (std::string(name) + ".yaml"));
    EXPECT_EQ(to_yaml(file), to_yaml(preset_config(name))) << name;
  }
}

TEST(Config, YamlRoundTrip) {
  for (const char* name : {"experiment1", "experiment2", "experiment3"}) {
    const std::string text = to_yaml(preset_config(name));
    EXPECT_EQ(to_yaml(parse_experiment_config(text)), text);
  }
}

TEST(Config, JsonIsAccepted) {
  const ExperimentConfig cfg = parse_experiment_config(
      R"({"experiment": "loglinear", "lambda_xy": [0.1], "n_obs": [50], "criteria": ["sic"]})", "inline.json");
  EXPECT_EQ(cfg.kind, ExperimentKind::Loglinear);
  EXPECT_EQ(cfg.n_obs, (std::vector<std::int64_t>{50}));
}

TEST(Config, ErrorsCarryLocationAndField) {
  try {
    parse_experiment_config("experiment: loglinear\nlambda_xy: [0.1]\nreplicates: many\n", "bad.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("bad.yaml:3:", 0), 0u) << e.what();
    EXPECT_NE(std::string(e.what()).find("replicates"), std::string::npos);
  }
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_experiment_config("experiment: loglinear\nlambda_xy: [0]\ncolour: red\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("experiment: quantum\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("experiment: loglinear\nlambda_xy: [0]\nn_obs: [10]\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("experiment: loglinear\nlambda_xy: [0]\nbolfi: {final_reps: -1}\n"),
               ConfigError);
  EXPECT_THROW(parse_experiment_config("experiment: nfds\ncriteria: [sic]\n"), ConfigError);
  EXPECT_THROW(load_experiment_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Config, PaperScaleOverridesReplicatesAndBudget) {
  ExperimentConfig cfg = preset_config("experiment2");
  cfg.apply_paper_scale();
  EXPECT_EQ(cfg.replicates, 100);
  EXPECT_EQ(cfg.bolfi.budget, 2000);
}

TEST(Experiment, RatesSummarizeSelections) {
  const ExperimentConfig cfg = parse_experiment_config(kSmallNested);
  const ExperimentResult r = run_experiment(cfg);
  EXPECT_EQ(r.model_names, (std::vector<std::string>{"M0", "M1", "M2"}));
  EXPECT_EQ(r.selections.size(), 2u * 2u * 3u * 3u);
  EXPECT_EQ(r.rates.size(), 2u * 2u * 3u);
  for (const RateRow& row : r.rates) {
    double total = 0.0;
    for (double x : row.rates) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(row.replicates, 3);
    EXPECT_DOUBLE_EQ(row.true_model_rate, row.rates[r.true_model[row.setting]]);
  }
  EXPECT_EQ(r.true_model, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.razor_violations, 0);
  EXPECT_EQ(r.razor_instances, 2 * 2 * 3 * 3);
}

TEST(Experiment, ByteIdenticalReruns) {
  const ExperimentConfig cfg = parse_experiment_config(kSmallNested);
  EXPECT_EQ(selections(run_experiment(cfg), cfg), selections(run_experiment(cfg), cfg));
}

TEST(Experiment, IndependentOfWorkerCount) {
  const ExperimentConfig cfg = parse_experiment_config(kSmallLoglinear);
  RunOptions two;
  two.jobs = 2;
  EXPECT_EQ(selections(run_experiment(cfg), cfg), selections(run_experiment(cfg, two), cfg));
}

TEST(Experiment, SeedChangesData) {
  ExperimentConfig cfg = parse_experiment_config(kSmallNested);
  const std::string a = selections(run_experiment(cfg), cfg);
  cfg.master_seed = 12;
  EXPECT_NE(a, selections(run_experiment(cfg), cfg));
}

TEST(Experiment, WritesAllOutputs) {
  const ExperimentConfig cfg = parse_experiment_config(kSmallLoglinear);
  const ExperimentResult r = run_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "jsdrazor_experiment_outputs";
  std::filesystem::remove_all(dir);
  write_experiment_outputs(r, cfg, dir);
  const std::string sel = slurp(dir / "selections.csv");
  EXPECT_EQ(sel.rfind("experiment,setting,true_model,true_params,n_obs,replicate,criterion,selected_model", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(sel.begin(), sel.end(), '\n')), r.selections.size() + 1);
  const std::string rates = slurp(dir / "rates.csv");
  EXPECT_NE(rates.find("rate_LL3"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report["version"], std::string(version()));
  EXPECT_EQ(report["models"].size(), 2u);
  EXPECT_TRUE(report.contains("wall_seconds"));
  EXPECT_TRUE(report.contains("config"));
  std::filesystem::remove_all(dir);
}

TEST(Experiment, SicBolfiScoresArePresent) {
  const ExperimentConfig cfg = parse_experiment_config(kSmallLoglinear);
  const ExperimentResult r = run_experiment(cfg);
  int bolfi_rows = 0;
  for (const SelectionRow& row : r.selections) {
    if (row.criterion != Criterion::SicBolfi) continue;
    ++bolfi_rows;
    for (double o : row.objectives) {
      EXPECT_GE(o, 0.0);
      EXPECT_LE(o, std::log(2.0));
    }
  }
  EXPECT_EQ(bolfi_rows, 4);
  EXPECT_THROW(r.rate(9, 0, Criterion::Sic), ConfigError);
}

TEST(Validate, AllPropertiesPassAtReducedSize) {
  ValidationOptions o;
  o.divergence_pairs = 500;
  o.calculus_points = 10;
  o.volume_intervals = 10;
  o.razor_instances = 30;
  o.evidence_instances = 20;
  int seen = 0;
  const auto results = validate_theory(o, [&](const PropertyResult&) { ++seen; });
  EXPECT_EQ(seen, static_cast<int>(results.size()));
  EXPECT_EQ(results.size(), 7u);
  for (const PropertyResult& r : results) {
    EXPECT_TRUE(r.passed) << format_property(r);
    EXPECT_EQ(r.violations, 0) << r.name;
    EXPECT_GT(r.checked, 0) << r.name;
  }
}

}  // namespace
}  // namespace jsdrazor
