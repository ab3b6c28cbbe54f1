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

#include "jsdrazor/categorical.hpp"

#include <boost/random/binomial_distribution.hpp>
#include <charconv>
#include <cmath>
#include <numeric>

#include "jsdrazor/csv.hpp"
#include "jsdrazor/error.hpp"

namespace jsdrazor {

namespace {
constexpr double kSimplexTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}
}  // namespace

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw SimplexError("categorical distribution needs k >= 2 categories");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw SimplexError("probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    throw SimplexError("probabilities sum to " + format_real(sum) + ", not 1");
  if (sum != 1.0)
    for (double& p : probs_) p /= sum;
}

Categorical Categorical::uniform(std::size_t k) {
  return Categorical(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

bool Categorical::interior() const noexcept {
  for (double p : probs_)
    if (!(p > 0.0)) return false;
  return true;
}

CountVector::CountVector(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  for (auto c : counts_) {
    if (c < 0) throw DomainError("counts must be nonnegative");
    total_ += c;
  }
}

Categorical empirical_from_counts(const CountVector& c) {
  if (c.total() <= 0) throw EmptyData("empirical distribution of an empty sample");
  std::vector<double> p(c.k());
  const auto n = static_cast<double>(c.total());
  for (std::size_t i = 0; i < c.k(); ++i) p[i] = static_cast<double>(c[i]) / n;
  return Categorical(std::move(p));
}

std::int64_t sample_binomial(std::int64_t n, double p, Rng& rng) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  // BTRD is only valid for p <= 1/2; reflect otherwise.
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
  boost::random::binomial_distribution<std::int64_t, double> dist(n, p);
  return dist(rng);
}

CountVector sample_multinomial(std::span<const double> weights, std::int64_t n, Rng& rng) {
  if (n < 0) throw DomainError("multinomial sample size must be nonnegative");
  std::vector<std::int64_t> counts(weights.size(), 0);
  std::size_t last = weights.size();
  double remaining_mass = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      remaining_mass += weights[i];
      last = i;
    }
  }
  if (last == weights.size()) {
    if (n > 0) throw DomainError("multinomial weights have no positive entry");
    return CountVector(std::move(counts));
  }
  std::int64_t remaining = n;
  // The last positive cell absorbs the remainder so zero cells stay empty.
  for (std::size_t i = 0; i < last && remaining > 0; ++i) {
    const double w = weights[i];
    if (w <= 0.0) continue;
    counts[i] = sample_binomial(remaining, w / remaining_mass, rng);
    remaining -= counts[i];
    remaining_mass -= w;
  }
  counts[last] = remaining;
  return CountVector(std::move(counts));
}

CountVector sample_multinomial(const Categorical& p, std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_multinomial(p.probs(), n, rng);
}

double log_type_class_size(const CountVector& c) {
  double out = std::lgamma(static_cast<double>(c.total()) + 1.0);
  for (auto x : c.counts()) out -= std::lgamma(static_cast<double>(x) + 1.0);
  return out;
}

double entropy(const Categorical& p) {
  double h = 0.0;
  for (double x : p.probs())
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

std::string to_csv_row(const CountVector& c) {
  std::string out;
  for (std::size_t i = 0; i < c.k(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

std::string to_csv_row(const Categorical& p) {
  std::string out;
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (i) out += ',';
    out += format_real(p[i]);
  }
  return out;
}

CountVector parse_count_row(std::string_view row) {
  std::vector<std::int64_t> counts;
  for (const auto& field : split_csv_record(row)) {
    const auto f = trim(field);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
      throw ConfigError("not an integer count: '" + std::string(f) + "'");
    if (v < 0) throw ConfigError("negative count: " + std::string(f));
    counts.push_back(v);
  }
  return CountVector(std::move(counts));
}

Categorical parse_probability_row(std::string_view row) {
  std::vector<double> probs;
  for (const auto& field : split_csv_record(row)) {
    const std::string f(trim(field));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(f, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a probability: '" + f + "'");
    }
    if (used != f.size()) throw ConfigError("not a probability: '" + f + "'");
    probs.push_back(v);
  }
  return Categorical(std::move(probs));
}

}  // namespace jsdrazor
