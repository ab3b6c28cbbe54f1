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


#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "jsdrazor/bolfi.hpp"
#include "jsdrazor/categorical.hpp"
#include "jsdrazor/divergence.hpp"
#include "jsdrazor/estimate.hpp"
#include "jsdrazor/evidence.hpp"
#include "jsdrazor/gp.hpp"
#include "jsdrazor/model.hpp"
#include "jsdrazor/nfds.hpp"
#include "jsdrazor/rng.hpp"
#include "jsdrazor/simulators.hpp"

namespace {

using namespace jsdrazor;

Categorical random_categorical(std::size_t k, Rng& rng) {
  std::vector<double> p(k);
  for (auto& x : p) x = 0.01 + rng.uniform();
  double total = 0.0;
  for (double x : p) total += x;
  for (auto& x : p) x /= total;
  return Categorical(std::move(p));
}

void BM_Jsd(benchmark::State& state) {
  Rng rng(1);
  const auto k = static_cast<std::size_t>(state.range(0));
  const Categorical p = random_categorical(k, rng);
  const Categorical q = random_categorical(k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(jsd(p, q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Jsd)->Arg(4)->Arg(64)->Arg(1024);

void BM_MinJsdFitLoglinear(benchmark::State& state) {
  const ParametricModel m = loglinear_model(LoglinearVariant::Saturated);
  const auto sim = loglinear_simulator(LoglinearVariant::Saturated);
  const Categorical p_hat = empirical_from_counts(sim->run((Vector(3) << 0.3, -0.2, 0.25).finished(), 1000, 7));
  for (auto _ : state) benchmark::DoNotOptimize(min_jsd_fit(m, p_hat, {}, 11).objective);
}
BENCHMARK(BM_MinJsdFitLoglinear)->Unit(benchmark::kMillisecond);

void BM_MleFitNested(benchmark::State& state) {
  const ParametricModel m = nested_example_model(static_cast<std::size_t>(state.range(0)));
  const CountVector c({510, 290, 200});
  for (auto _ : state) benchmark::DoNotOptimize(mle_fit(m, c, {}, 5).objective);
}
BENCHMARK(BM_MleFitNested)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_GpFit(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Box box = Box::cube(3, -2.0, 2.0);
  Rng rng(3);
  Matrix x(n, 3);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = -2.0 + 4.0 * rng.uniform();
    y(i) = x.row(i).squaredNorm() + 0.05 * rng.uniform();
  }
  for (auto _ : state) benchmark::DoNotOptimize(gp_fit(box, x, y).log_marginal_likelihood());
}
BENCHMARK(BM_GpFit)->Arg(32)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ModelEvidence(benchmark::State& state) {
  const ParametricModel m = nested_example_model(2);
  const CountVector c({18, 12, 10});
  const PriorSpec prior = PriorSpec::uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model_evidence(m, c, prior));
}
BENCHMARK(BM_ModelEvidence)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NfdsSimulate(benchmark::State& state) {
  NFDSConfig cfg = nfds_config_from_data(synthetic_cluster_data(2017), 1000, 9);
  cfg.pop_size = state.range(0);
  const auto sim = nfds_simulator(cfg, NFDSVariant::Homogeneous);
  const Vector theta = (Vector(3) << std::log(0.007), std::log(0.05), std::log(0.007)).finished();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim->run(theta, 500, ++seed).total());
}
BENCHMARK(BM_NfdsSimulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
