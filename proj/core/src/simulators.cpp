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

#include "jsdrazor/simulators.hpp"

#include "jsdrazor/error.hpp"

namespace jsdrazor {

CountVector ModelSimulator::run(const Vector& theta, std::int64_t n, std::uint64_t seed) const {
  if (static_cast<std::size_t>(theta.size()) != model_.d())
    throw DimensionError(model_.name() + ": expected " + std::to_string(model_.d()) + " parameters");
  return sample_multinomial(model_.categorical(theta), n, seed);
}

std::shared_ptr<const Simulator> multilogit_simulator(ParametricModel model) {
  return std::make_shared<ModelSimulator>(std::move(model));
}

std::shared_ptr<const Simulator> loglinear_simulator(LoglinearVariant variant, std::int64_t n) {
  return std::make_shared<ModelSimulator>(loglinear_model(variant, n));
}

}  // namespace jsdrazor
