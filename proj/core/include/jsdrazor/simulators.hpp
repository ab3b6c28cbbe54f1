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

#include <memory>

#include "jsdrazor/bolfi.hpp"
#include "jsdrazor/model.hpp"

namespace jsdrazor {

/// Multinomial sampling from a model with explicit category probabilities:
/// run(theta, n, seed) = sample_multinomial(p(theta), n, seed).
class ModelSimulator final : public Simulator {
 public:
  explicit ModelSimulator(ParametricModel model) : model_(std::move(model)) {}

  std::string name() const override { return model_.name(); }
  std::size_t k() const override { return model_.k(); }
  const Box& box() const override { return model_.box(); }
  CountVector run(const Vector& theta, std::int64_t n, std::uint64_t seed) const override;

  const ParametricModel& model() const noexcept { return model_; }

 private:
  ParametricModel model_;
};

std::shared_ptr<const Simulator> multilogit_simulator(ParametricModel model);
std::shared_ptr<const Simulator> loglinear_simulator(LoglinearVariant variant, std::int64_t n = 1);

}  // namespace jsdrazor
