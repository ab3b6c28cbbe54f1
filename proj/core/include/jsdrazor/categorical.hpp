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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jsdrazor/rng.hpp"

namespace jsdrazor {

/// A point on the probability simplex over k >= 2 categories.
///
/// Inputs whose sum is within 1e-9 of one are renormalized; anything further
/// off is rejected with SimplexError. Zero entries are allowed: empirical
/// summaries routinely have empty cells.
class Categorical {
 public:
  explicit Categorical(std::vector<double> probs);

  static Categorical uniform(std::size_t k);

  std::size_t k() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const noexcept { return probs_[i]; }

  /// True when every entry is strictly positive.
  bool interior() const noexcept;

  friend bool operator==(const Categorical&, const Categorical&) = default;

 private:
  std::vector<double> probs_;
};

/// Nonnegative integer category counts.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::vector<std::int64_t> counts);

  std::size_t k() const noexcept { return counts_.size(); }
  std::int64_t total() const noexcept { return total_; }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  std::int64_t operator[](std::size_t i) const noexcept { return counts_[i]; }

  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Relative frequencies counts_i / total. Throws EmptyData when total == 0.
Categorical empirical_from_counts(const CountVector& c);

/// Draws Multinomial(n, p) by sequential conditional binomials.
/// Deterministic given the seed.
CountVector sample_multinomial(const Categorical& p, std::int64_t n, std::uint64_t seed);

/// Same draw from an explicit generator. `weights` need not be normalized but
/// must be nonnegative with a positive sum.
CountVector sample_multinomial(std::span<const double> weights, std::int64_t n, Rng& rng);

/// Single Binomial(n, p) draw (BTRD for large n*p, inversion otherwise).
std::int64_t sample_binomial(std::int64_t n, double p, Rng& rng);

/// ln( n! / prod_j n_j! ), evaluated with lgamma.
double log_type_class_size(const CountVector& c);

/// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const Categorical& p);

/// CSV row of integers, e.g. "50,30,20".
std::string to_csv_row(const CountVector& c);
/// CSV row of probabilities at 17 significant digits.
std::string to_csv_row(const Categorical& p);

/// Parses a CSV row of nonnegative integers. Throws ConfigError on junk.
CountVector parse_count_row(std::string_view row);
/// Parses a CSV row of reals into a Categorical.
Categorical parse_probability_row(std::string_view row);

}  // namespace jsdrazor
