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

#include <cmath>
#include <filesystem>
#include <vector>

#include "jsdrazor/bolfi.hpp"
#include "jsdrazor/categorical.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/nfds.hpp"
#include "jsdrazor/simulators.hpp"

namespace jsdrazor {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

NFDSConfig small_config() {
  NFDSConfig cfg = nfds_config_from_data(synthetic_cluster_data(2017), 100, 7);
  cfg.pop_size = 10000;
  return cfg;
}

double vaccine_share(const NFDSConfig& cfg, const std::vector<std::int64_t>& counts) {
  double vt = 0.0, total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += static_cast<double>(counts[i]);
    if (cfg.vaccine_type[i]) vt += static_cast<double>(counts[i]);
  }
  return vt / total;
}

double initial_vaccine_share(const NFDSConfig& cfg) {
  double vt = 0.0;
  for (std::size_t i = 0; i < cfg.n_clusters(); ++i)
    if (cfg.vaccine_type[i]) vt += cfg.initial_freqs[static_cast<Eigen::Index>(i)];
  return vt;
}

TEST(SplitEvenly, EarlierBlocksTakeRemainder) {
  EXPECT_EQ(split_evenly(10, 3), (std::vector<std::int64_t>{4, 3, 3}));
  EXPECT_EQ(split_evenly(6, 2), (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(split_evenly(0, 2), (std::vector<std::int64_t>{0, 0}));
}

TEST(MultilogitSimulator, LawOfLargeNumbers) {
  const auto sim = multilogit_simulator(nested_example_model(2));
  const CountVector c = sim->run(vec({0, 0}), 3000000, 1);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(static_cast<double>(c[i]) / 3e6, 1.0 / 3.0, 0.002);
}

TEST(MultilogitSimulator, ZeroSampleAndDeterminism) {
  const auto sim = multilogit_simulator(nested_example_model(2));
  EXPECT_EQ(sim->run(vec({0.5, 0.5}), 0, 1).total(), 0);
  EXPECT_EQ(sim->run(vec({0.5, -1}), 500, 4), sim->run(vec({0.5, -1}), 500, 4));
  EXPECT_EQ(sim->d(), 2u);
  EXPECT_EQ(sim->k(), 3u);
}

TEST(LoglinearSimulator, SymmetricAtZero) {
  const auto sim = loglinear_simulator(LoglinearVariant::Saturated);
  const CountVector c = sim->run(vec({0, 0, 0}), 1000000, 2);
  EXPECT_EQ(c.total(), 1000000);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(static_cast<double>(c[i]) / 1e6, 0.25, 0.002);
}

TEST(LoglinearSimulator, InteractionCellsShareFrequency) {
  const auto sim = loglinear_simulator(LoglinearVariant::Saturated);
  const CountVector c = sim->run(vec({0, 0, 0.5}), 1000000, 3);
  const double expected = 0.3655292893150025;
  EXPECT_NEAR(static_cast<double>(c[0]) / 1e6, expected, 0.002);
  EXPECT_NEAR(static_cast<double>(c[3]) / 1e6, expected, 0.002);
}

TEST(ClusterData, SyntheticShape) {
  const ClusterData d = synthetic_cluster_data(2017);
  EXPECT_EQ(d.n_clusters(), 41u);
  std::int64_t t0 = 0, t36 = 0, t72 = 0;
  for (std::size_t i = 0; i < d.n_clusters(); ++i) {
    t0 += d.count_t0[i];
    t36 += d.count_t36[i];
    t72 += d.count_t72[i];
  }
  EXPECT_EQ(t0, 133);
  EXPECT_EQ(t36, 203);
  EXPECT_EQ(t72, 280);
  EXPECT_EQ(d.post_vaccine_counts().total(), 483);
  EXPECT_EQ(d.post_vaccine_counts().k(), 82u);
}

TEST(ClusterData, CsvRoundTrip) {
  const ClusterData d = synthetic_cluster_data(5);
  const auto path = std::filesystem::temp_directory_path() / "jsdrazor_clusters_roundtrip.csv";
  write_cluster_csv(path, d);
  const ClusterData back = read_cluster_csv(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.cluster_ids, d.cluster_ids);
  EXPECT_EQ(back.vaccine_type, d.vaccine_type);
  EXPECT_EQ(back.count_t0, d.count_t0);
  EXPECT_EQ(back.count_t36, d.count_t36);
  EXPECT_EQ(back.count_t72, d.count_t72);
}

TEST(ClusterData, MissingFileThrows) {
  EXPECT_THROW(read_cluster_csv("/nonexistent/clusters.csv"), ConfigError);
}

TEST(GenerateLoci, InteriorLocusFrequencies) {
  const NFDSConfig cfg = small_config();
  EXPECT_NO_THROW(cfg.validate());
  const Vector f = cfg.loci.transpose() * cfg.initial_freqs;
  EXPECT_GT(f.minCoeff(), 0.0);
  EXPECT_LT(f.maxCoeff(), 1.0);
  EXPECT_TRUE(f.isApprox(cfg.equilibrium_freqs));
  EXPECT_TRUE((cfg.loci.array() == 0.0 || cfg.loci.array() == 1.0).all());
}

TEST(NFDSBox, DimensionsAndRanges) {
  EXPECT_EQ(nfds_box(NFDSVariant::Neutral).dim(), 2u);
  EXPECT_EQ(nfds_box(NFDSVariant::Homogeneous).dim(), 3u);
  const Box h = nfds_box(NFDSVariant::Heterogeneous);
  EXPECT_EQ(h.dim(), 5u);
  EXPECT_DOUBLE_EQ(h.lower()[0], -7.0);
  EXPECT_DOUBLE_EQ(h.upper()[1], -0.7);
  EXPECT_DOUBLE_EQ(h.upper()[3], -1.9);
  EXPECT_DOUBLE_EQ(h.upper()[4], 1.0);
}

TEST(NFDSSimulator, ParameterMappingAndConstraint) {
  const NFDSSimulator sim(small_config(), NFDSVariant::Heterogeneous);
  const NFDSParameters p = sim.natural(vec({std::log(0.01), std::log(0.1), std::log(0.05), std::log(0.01), 0.4}));
  EXPECT_NEAR(p.m, 0.01, 1e-15);
  EXPECT_NEAR(p.sigma_w, 0.01, 1e-15);
  EXPECT_DOUBLE_EQ(p.p_f, 0.4);
  EXPECT_FALSE(sim.feasible(vec({-3, -3, -4, -3, 0.5})));
  EXPECT_THROW(sim.natural(vec({-3, -3, -4, -3, 0.5})), ConstraintError);
  EXPECT_THROW(sim.natural(vec({0, -3, -2, -3, 0.5})), DomainError);
  EXPECT_THROW(sim.natural(vec({-3, -3})), DimensionError);
}

TEST(NFDSSimulator, OutputLayoutAndDeterminism) {
  const NFDSSimulator sim(small_config(), NFDSVariant::Homogeneous);
  const Vector theta = vec({std::log(0.007), std::log(0.05), std::log(0.007)});
  const CountVector c = sim.run(theta, 501, 3);
  EXPECT_EQ(c.total(), 501);
  EXPECT_EQ(c.k(), 82u);
  EXPECT_EQ(sim.block_sizes(), (std::vector<std::size_t>{41, 41}));
  std::int64_t first = 0;
  for (std::size_t i = 0; i < 41; ++i) first += c[i];
  EXPECT_EQ(first, 251);
  EXPECT_EQ(c, sim.run(theta, 501, 3));
}

TEST(NFDSSimulator, PopulationCountsSumToPopSize) {
  const NFDSConfig cfg = small_config();
  const auto states = simulate_population(cfg, NFDSVariant::Heterogeneous, {0.01, 0.1, 0.05, 0.01, 0.5}, 4);
  ASSERT_EQ(states.size(), 2u);
  for (const auto& s : states) {
    std::int64_t total = 0;
    for (auto x : s) total += x;
    EXPECT_EQ(total, cfg.pop_size);
  }
}

TEST(NFDSSimulator, VaccineSelectionLowersVaccineShare) {
  const NFDSConfig cfg = small_config();
  const double before = initial_vaccine_share(cfg);
  int decreasing = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto states = simulate_population(cfg, NFDSVariant::Neutral, {0.001, std::exp(-0.7), 0, 0, 1}, s);
    if (vaccine_share(cfg, states[0]) < before) ++decreasing;
  }
  EXPECT_GE(decreasing, 95);
}

TEST(NFDSSimulator, FullMigrationKeepsInitialDistribution) {
  const NFDSConfig cfg = small_config();
  const auto states = simulate_population(cfg, NFDSVariant::Neutral, {1.0, 0.5, 0, 0, 1}, 5);
  for (const auto& s : states) {
    double tv = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      tv += std::abs(static_cast<double>(s[i]) / cfg.pop_size - cfg.initial_freqs[static_cast<Eigen::Index>(i)]);
    EXPECT_LT(tv, 0.05);
  }
}

TEST(NFDSSimulator, NeutralDriftIsAMartingale) {
  const NFDSConfig cfg = small_config();
  const int reps = 200;
  const std::size_t k = cfg.n_clusters();
  std::vector<double> sum(k, 0.0), sum2(k, 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto states = simulate_population(cfg, NFDSVariant::Neutral, {0, 0, 0, 0, 1}, derive_seed(6, r));
    for (std::size_t i = 0; i < k; ++i) {
      const double f = static_cast<double>(states[1][i]) / cfg.pop_size;
      sum[i] += f;
      sum2[i] += f * f;
    }
  }
  int outside = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double mean = sum[i] / reps;
    const double se = std::sqrt(std::max(sum2[i] / reps - mean * mean, 0.0) / reps);
    if (std::abs(mean - cfg.initial_freqs[static_cast<Eigen::Index>(i)]) > 2 * se + 1e-4) ++outside;
  }
  EXPECT_LE(outside, 5);
}

TEST(NFDSSimulator, SelectionPullsLociTowardEquilibrium) {
  NFDSConfig cfg = small_config();
  cfg.pop_size = 100000;
  const auto distance = [&](const NFDSParameters& p) {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto states = simulate_population(cfg, p.sigma_f > 0 ? NFDSVariant::Homogeneous : NFDSVariant::Neutral, p, s);
      Vector counts(static_cast<Eigen::Index>(cfg.n_clusters()));
      for (std::size_t i = 0; i < cfg.n_clusters(); ++i) counts[static_cast<Eigen::Index>(i)] = static_cast<double>(states[1][i]);
      const Vector f = cfg.loci.transpose() * counts / static_cast<double>(cfg.pop_size);
      total += (f - cfg.equilibrium_freqs).squaredNorm();
    }
    return total;
  };
  EXPECT_LT(distance({0.001, 0.2, 0.05, 0, 1}), distance({0.001, 0.2, 0, 0, 1}));
}

TEST(NFDSSimulator, MultiBlockDiscrepancyIsBounded) {
  const NFDSSimulator sim(small_config(), NFDSVariant::Neutral);
  const CountVector data = synthetic_cluster_data(2017).post_vaccine_counts();
  const auto blocks = observed_blocks(sim, data);
  ASSERT_EQ(blocks.size(), 2u);
  const double d = discrepancy(sim, vec({-5, -3}), blocks, 483, 2, 1);
  EXPECT_GT(d, 0.0);
  EXPECT_LT(d, std::log(2.0));
}

}  // namespace
}  // namespace jsdrazor
