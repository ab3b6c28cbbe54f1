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
#include <functional>
#include <string>
#include <vector>

namespace jsdrazor {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  // Worst observed slack, negative when a property failed.
  double margin = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 20190601;
  int divergence_pairs = 10000;
  int calculus_points = 100;
  int volume_intervals = 50;
  int razor_instances = 200;
  int evidence_instances = 100;
};

PropertyResult check_divergence_properties(int pairs, std::uint64_t seed);
PropertyResult check_fisher_information(int points, std::uint64_t seed);
PropertyResult check_jsd_derivatives(int points, std::uint64_t seed);
PropertyResult check_model_volume(int intervals, std::uint64_t seed);
PropertyResult check_razor_inequality(int instances, std::uint64_t seed);
PropertyResult check_evidence_chain(int instances, std::uint64_t seed);
PropertyResult check_acceptance_limit();

std::vector<PropertyResult> validate_theory(const ValidationOptions& options = {},
                                            const std::function<void(const PropertyResult&)>& on_result = {});

std::string format_property(const PropertyResult& r);

}  // namespace jsdrazor
