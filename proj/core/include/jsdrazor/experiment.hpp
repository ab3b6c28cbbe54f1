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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "jsdrazor/config.hpp"

namespace jsdrazor {

std::string_view version();

struct SelectionRow {
  std::size_t setting = 0;
  std::size_t n_obs_index = 0;
  int replicate = 0;
  Criterion criterion = Criterion::SicJsd;
  /// Parameters that generated this replicate's data.
  Vector true_theta;
  std::size_t selected = 0;
  std::vector<double> scores;
  /// Fit term behind each score: D_JS, -ln P(D) or expected D_JS.
  std::vector<double> objectives;
};

struct RateRow {
  std::size_t setting = 0;
  std::size_t n_obs_index = 0;
  Criterion criterion = Criterion::SicJsd;
  int replicates = 0;
  std::vector<double> rates;
  double true_model_rate = 0.0;
};

struct ExperimentResult {
  std::vector<std::string> model_names;
  std::vector<std::size_t> dims;
  std::vector<std::string> setting_labels;
  /// Index of the data-generating model among the candidates, per setting.
  std::vector<std::size_t> true_model;
  std::vector<std::int64_t> n_obs;
  std::vector<SelectionRow> selections;
  std::vector<RateRow> rates;
  /// SIC-JSD < SIC checks over every fitted (replicate, model) pair.
  std::int64_t razor_instances = 0;
  std::int64_t razor_violations = 0;
  double wall_seconds = 0.0;

  const RateRow& rate(std::size_t setting, std::size_t n_obs_index, Criterion c) const;
};

struct RunOptions {
  int jobs = 1;
  /// Called after each finished replicate with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Simulates every (setting, n_obs, replicate) data set, scores all candidate
/// models with every requested criterion and tabulates selection rates.
/// Replicate r of cell c = setting * |n_obs| + n_obs_index draws its data
/// with derive_seed(master_seed, c, r, 0); results do not depend on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Writes selections.csv, rates.csv and report.json into `dir`.
void write_experiment_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                              const std::filesystem::path& dir);

void write_selections_csv(std::ostream& out, const ExperimentResult& result, const ExperimentConfig& cfg);
void write_rates_csv(std::ostream& out, const ExperimentResult& result, const ExperimentConfig& cfg);

}  // namespace jsdrazor
