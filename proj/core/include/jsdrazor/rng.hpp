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
#include <limits>

namespace jsdrazor {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used for seeding and
/// for deriving independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a stream tag. Children with
/// different tags are statistically independent, and a child depends only on
/// (parent, tag), so adding streams never perturbs existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
  return splitmix64(parent ^ splitmix64(tag ^ 0xD1B54A32D192ED03ULL));
}

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag, Tags... rest) noexcept {
  return derive_seed(derive_seed(parent, tag), static_cast<std::uint64_t>(rest)...);
}

/// xoshiro256** 1.0 (Blackman & Vigna), seeded through SplitMix64.
/// Satisfies UniformRandomBitGenerator; output is identical on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Lemire's nearly divisionless method.
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::uint64_t s_[4];
};

}  // namespace jsdrazor
