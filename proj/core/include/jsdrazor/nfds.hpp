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
#include <memory>
#include <string>
#include <vector>

#include "jsdrazor/bolfi.hpp"

namespace jsdrazor {

/// Sequence-cluster counts at the pre-vaccine and two post-vaccine samples.
struct ClusterData {
  std::vector<std::string> cluster_ids;
  std::vector<bool> vaccine_type;
  std::vector<std::int64_t> count_t0;
  std::vector<std::int64_t> count_t36;
  std::vector<std::int64_t> count_t72;

  std::size_t n_clusters() const noexcept { return cluster_ids.size(); }
  /// Post-vaccine counts laid out as NFDS simulator output (t36 block, then t72).
  CountVector post_vaccine_counts() const;
};

/// Columns cluster_id, vt_flag, count_t0, count_t36, count_t72 with a header row.
ClusterData read_cluster_csv(const std::filesystem::path& path);
void write_cluster_csv(const std::filesystem::path& path, const ClusterData& data);

struct NFDSConfig {
  std::vector<bool> vaccine_type;
  /// Cluster x locus presence matrix (0/1).
  Matrix loci;
  /// Equilibrium locus frequencies e_l, strictly inside (0, 1).
  Vector equilibrium_freqs;
  /// Cluster distribution at t = 0; also the migration source.
  Vector initial_freqs;
  std::int64_t pop_size = 10000;
  int generations_per_obs = 1;
  std::vector<int> obs_times{36, 72};
  /// Fixes which loci are under strong selection for a given p_f.
  std::uint64_t locus_seed = 0;

  std::size_t n_clusters() const noexcept { return vaccine_type.size(); }
  std::size_t n_loci() const noexcept { return static_cast<std::size_t>(loci.cols()); }
  /// Throws ConfigError on inconsistent sizes or non-interior frequencies.
  void validate() const;
};

/// Random accessory-genome presence matrix with every locus frequency under
/// `initial_freqs` strictly inside (0, 1). Clusters 2j and 2j+1 share a
/// lineage profile and differ from it at each locus with probability 0.05.
Matrix generate_loci(const Vector& initial_freqs, std::size_t n_loci, std::uint64_t seed);

/// Config built from observed cluster data: initial distribution from the
/// t = 0 counts, equilibrium frequencies from the initial locus frequencies.
NFDSConfig nfds_config_from_data(const ClusterData& data, std::size_t n_loci, std::uint64_t loci_seed);

enum class NFDSVariant { Neutral, Homogeneous, Heterogeneous };

std::string_view to_string(NFDSVariant v);

struct NFDSParameters {
  double m = 0.0;
  double v = 0.0;
  double sigma_f = 0.0;
  double sigma_w = 0.0;
  double p_f = 1.0;
};

/// True when `locus` is under strong selection at proportion p_f.
bool strong_locus(std::uint64_t locus_seed, std::size_t locus, double p_f);

/// Cluster counts of the whole population at each observation time.
std::vector<std::vector<std::int64_t>> simulate_population(const NFDSConfig& cfg, NFDSVariant variant,
                                                           const NFDSParameters& params, std::uint64_t seed);

/// Toy negative frequency-dependent selection model on log-scale parameters:
/// neutral (ln m, ln v), homogeneous (+ ln sigma_f), heterogeneous
/// (+ ln sigma_w, p_f) with sigma_f > sigma_w.
class NFDSSimulator final : public Simulator {
 public:
  NFDSSimulator(NFDSConfig cfg, NFDSVariant variant);

  std::string name() const override;
  std::size_t k() const override { return cfg_.n_clusters() * cfg_.obs_times.size(); }
  const Box& box() const override { return box_; }
  std::vector<std::size_t> block_sizes() const override;
  bool feasible(const Vector& theta) const override;
  CountVector run(const Vector& theta, std::int64_t n, std::uint64_t seed) const override;

  NFDSVariant variant() const noexcept { return variant_; }
  const NFDSConfig& config() const noexcept { return cfg_; }
  /// Maps log-scale theta to natural parameters (DomainError outside the box,
  /// ConstraintError when sigma_f <= sigma_w).
  NFDSParameters natural(const Vector& theta) const;
  /// Simulates the population and samples n isolates without replacement,
  /// split evenly over the observation times.
  CountVector run_natural(const NFDSParameters& params, std::int64_t n, std::uint64_t seed) const;

 private:
  NFDSConfig cfg_;
  NFDSVariant variant_;
  Box box_;
};

std::shared_ptr<const Simulator> nfds_simulator(const NFDSConfig& cfg, NFDSVariant variant);

/// Parameter box of a variant on the log scale.
Box nfds_box(NFDSVariant variant);

/// Massachusetts-shaped synthetic stand-in: 41 clusters with VT flags and
/// 133 / 203 / 280 isolates at t = 0 / 36 / 72, generated from the
/// heterogeneous toy model.
ClusterData synthetic_cluster_data(std::uint64_t seed, std::size_t n_loci = 200);

}  // namespace jsdrazor
