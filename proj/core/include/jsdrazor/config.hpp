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
#include <string>
#include <string_view>
#include <vector>

#include "jsdrazor/bolfi.hpp"
#include "jsdrazor/estimate.hpp"
#include "jsdrazor/nfds.hpp"
#include "jsdrazor/razor.hpp"

namespace jsdrazor {

enum class ExperimentKind { NestedMultilogit, Loglinear, NFDS, Custom };

std::string_view to_string(ExperimentKind k);

struct CustomModelSpec {
  std::string name;
  Matrix predictors;
  std::size_t active_dims = 0;
  Box box;
};

/// One data-generating setting: a named true model and its parameters.
/// Log-linear settings leave `theta` as (lambda_xy) only; the main effects
/// are drawn per replicate.
struct TrueSetting {
  std::string model;
  Vector theta;
};

struct NFDSExperimentSpec {
  /// Cluster CSV; empty means the built-in synthetic stand-in.
  std::filesystem::path clusters_csv;
  std::uint64_t synthetic_seed = 2017;
  std::size_t n_loci = 200;
  std::uint64_t loci_seed = 7;
  std::int64_t pop_size = 10000;
  int generations_per_obs = 1;
  std::vector<int> obs_times{36, 72};
  /// Natural parameters per true setting (m, v, sigma_f, sigma_w, p_f).
  std::vector<NFDSParameters> params;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::NestedMultilogit;
  std::string name = "experiment";
  std::vector<TrueSetting> settings;
  std::vector<std::int64_t> n_obs{100, 1000};
  int replicates = 20;
  std::vector<Criterion> criteria{Criterion::Sic, Criterion::SicJsd};
  OptimizerSettings optimizer{};
  QuadratureSettings quadrature{};
  BolfiSettings bolfi{};
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "out";
  int paper_replicates = 100;
  int paper_budget = 1000;
  /// Log-linear main effects are drawn uniformly from [-r, r]^2.
  double main_effect_range = 1.0;
  std::vector<CustomModelSpec> custom_models;
  NFDSExperimentSpec nfds{};

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  void apply_paper_scale();
  bool wants(Criterion c) const;
};

/// Parses YAML (JSON is accepted as a subset). Errors carry
/// "<source>:<line>:<column>: <field>: <message>".
ExperimentConfig parse_experiment_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical YAML rendering of a config.
std::string to_yaml(const ExperimentConfig& cfg);

/// Built-in presets: "experiment1", "experiment2", "experiment3".
ExperimentConfig preset_config(std::string_view name);

}  // namespace jsdrazor
