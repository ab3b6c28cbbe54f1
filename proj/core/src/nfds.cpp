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

#include "jsdrazor/nfds.hpp"

#include <algorithm>
#include <boost/random/gamma_distribution.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jsdrazor/csv.hpp"
#include "jsdrazor/error.hpp"
#include "jsdrazor/rng.hpp"

namespace jsdrazor {

namespace {
constexpr double kLocusFlipProb = 0.05;
}  // namespace

CountVector ClusterData::post_vaccine_counts() const {
  std::vector<std::int64_t> c(count_t36);
  c.insert(c.end(), count_t72.begin(), count_t72.end());
  return CountVector(std::move(c));
}

namespace {

std::int64_t parse_count(const std::string& field, std::size_t line) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || v < 0)
    throw ConfigError("cluster CSV line " + std::to_string(line) + ": bad count '" + field + "'");
  return v;
}

bool parse_flag(std::string field, std::size_t line) {
  std::transform(field.begin(), field.end(), field.begin(), [](unsigned char c) { return std::tolower(c); });
  if (field == "1" || field == "true" || field == "vt") return true;
  if (field == "0" || field == "false" || field == "nvt") return false;
  throw ConfigError("cluster CSV line " + std::to_string(line) + ": bad vt_flag '" + field + "'");
}

std::vector<std::int64_t> sample_without_replacement(const std::vector<std::int64_t>& population, std::int64_t n,
                                                     Rng& rng) {
  std::vector<std::int64_t> left(population);
  std::int64_t remaining = 0;
  for (auto c : left) remaining += c;
  if (n > remaining) throw DomainError("cannot sample " + std::to_string(n) + " isolates from a population of " +
                                       std::to_string(remaining));
  std::vector<std::int64_t> out(left.size(), 0);
  for (std::int64_t draw = 0; draw < n; ++draw) {
    auto r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(remaining)));
    std::size_t i = 0;
    while (r >= left[i]) r -= left[i++];
    --left[i];
    ++out[i];
    --remaining;
  }
  return out;
}

}  // namespace

ClusterData read_cluster_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cluster CSV " + path.string());
  ClusterData d;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_record(line);
    if (header) {
      header = false;
      if (f.size() != 5 || f[0] != "cluster_id" || f[1] != "vt_flag" || f[2] != "count_t0" || f[3] != "count_t36" ||
          f[4] != "count_t72")
        throw ConfigError("cluster CSV " + path.string() +
                          ": header must be cluster_id,vt_flag,count_t0,count_t36,count_t72");
      continue;
    }
    if (f.size() != 5) throw ConfigError("cluster CSV line " + std::to_string(line_no) + ": expected 5 fields");
    d.cluster_ids.push_back(f[0]);
    d.vaccine_type.push_back(parse_flag(f[1], line_no));
    d.count_t0.push_back(parse_count(f[2], line_no));
    d.count_t36.push_back(parse_count(f[3], line_no));
    d.count_t72.push_back(parse_count(f[4], line_no));
  }
  if (d.n_clusters() < 2) throw ConfigError("cluster CSV " + path.string() + " needs at least two clusters");
  return d;
}

void write_cluster_csv(const std::filesystem::path& path, const ClusterData& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_csv_record(out, {"cluster_id", "vt_flag", "count_t0", "count_t36", "count_t72"});
  for (std::size_t i = 0; i < data.n_clusters(); ++i)
    write_csv_record(out, {data.cluster_ids[i], data.vaccine_type[i] ? "1" : "0", std::to_string(data.count_t0[i]),
                           std::to_string(data.count_t36[i]), std::to_string(data.count_t72[i])});
}

void NFDSConfig::validate() const {
  const auto k = static_cast<Eigen::Index>(n_clusters());
  if (k < 2) throw ConfigError("NFDS needs at least two clusters");
  if (loci.rows() != k) throw ConfigError("NFDS loci matrix must have one row per cluster");
  if (equilibrium_freqs.size() != loci.cols()) throw ConfigError("NFDS needs one equilibrium frequency per locus");
  if (initial_freqs.size() != k) throw ConfigError("NFDS needs one initial frequency per cluster");
  if ((loci.array() != 0.0 && loci.array() != 1.0).any()) throw ConfigError("NFDS loci matrix must be 0/1");
  if ((equilibrium_freqs.array() <= 0.0).any() || (equilibrium_freqs.array() >= 1.0).any())
    throw ConfigError("NFDS equilibrium frequencies must lie strictly inside (0, 1)");
  if ((initial_freqs.array() < 0.0).any() || std::abs(initial_freqs.sum() - 1.0) > 1e-9)
    throw ConfigError("NFDS initial frequencies must form a distribution");
  if (pop_size < 1) throw ConfigError("NFDS pop_size must be positive");
  if (generations_per_obs < 1) throw ConfigError("NFDS generations_per_obs must be positive");
  if (obs_times.empty() || !std::is_sorted(obs_times.begin(), obs_times.end()) ||
      std::adjacent_find(obs_times.begin(), obs_times.end()) != obs_times.end() || obs_times.front() < 0)
    throw ConfigError("NFDS obs_times must be distinct, ascending and nonnegative");
}

Matrix generate_loci(const Vector& initial_freqs, std::size_t n_loci, std::uint64_t seed) {
  const Eigen::Index k = initial_freqs.size();
  const Eigen::Index lineages = (k + 1) / 2;
  Matrix loci = Matrix::Zero(k, static_cast<Eigen::Index>(n_loci));
  Rng rng(seed);
  for (Eigen::Index l = 0; l < loci.cols(); ++l) {
    for (int attempt = 0;; ++attempt) {
      const double presence = 0.05 + 0.9 * rng.uniform();
      std::vector<bool> profile(static_cast<std::size_t>(lineages));
      for (std::size_t g = 0; g < profile.size(); ++g) profile[g] = rng.uniform() < presence;
      for (Eigen::Index i = 0; i < k; ++i) {
        const bool bit = profile[static_cast<std::size_t>(i / 2)] != (rng.uniform() < kLocusFlipProb);
        loci(i, l) = bit ? 1.0 : 0.0;
      }
      const double e = loci.col(l).dot(initial_freqs);
      if (e > 0.01 && e < 0.99) break;
      if (attempt == 1000) throw ConfigError("cannot place an interior locus; initial distribution too concentrated");
    }
  }
  return loci;
}

NFDSConfig nfds_config_from_data(const ClusterData& data, std::size_t n_loci, std::uint64_t loci_seed) {
  NFDSConfig cfg;
  cfg.vaccine_type = data.vaccine_type;
  const auto k = static_cast<Eigen::Index>(data.n_clusters());
  cfg.initial_freqs.resize(k);
  double total = 0.0;
  for (auto c : data.count_t0) total += static_cast<double>(c);
  if (total <= 0.0) throw ConfigError("cluster data has no t = 0 isolates");
  for (Eigen::Index i = 0; i < k; ++i) cfg.initial_freqs[i] = static_cast<double>(data.count_t0[static_cast<std::size_t>(i)]) / total;
  cfg.loci = generate_loci(cfg.initial_freqs, n_loci, loci_seed);
  cfg.equilibrium_freqs = cfg.loci.transpose() * cfg.initial_freqs;
  cfg.locus_seed = derive_seed(loci_seed, 1);
  cfg.validate();
  return cfg;
}

std::string_view to_string(NFDSVariant v) {
  switch (v) {
    case NFDSVariant::Neutral: return "neutral";
    case NFDSVariant::Homogeneous: return "homogeneous";
    case NFDSVariant::Heterogeneous: return "heterogeneous";
  }
  return "?";
}

bool strong_locus(std::uint64_t locus_seed, std::size_t locus, double p_f) {
  const double u = static_cast<double>(splitmix64(derive_seed(locus_seed, locus)) >> 11) * 0x1.0p-53;
  return u < p_f;
}

std::vector<std::vector<std::int64_t>> simulate_population(const NFDSConfig& cfg, NFDSVariant variant,
                                                           const NFDSParameters& params, std::uint64_t seed) {
  const auto k = static_cast<Eigen::Index>(cfg.n_clusters());
  const auto n_loci = cfg.loci.cols();
  Vector sigma = Vector::Zero(n_loci);
  if (variant == NFDSVariant::Homogeneous) sigma.setConstant(params.sigma_f);
  if (variant == NFDSVariant::Heterogeneous)
    for (Eigen::Index l = 0; l < n_loci; ++l)
      sigma[l] = strong_locus(cfg.locus_seed, static_cast<std::size_t>(l), params.p_f) ? params.sigma_f : params.sigma_w;
  Vector penalty(k);
  for (Eigen::Index i = 0; i < k; ++i) penalty[i] = cfg.vaccine_type[static_cast<std::size_t>(i)] ? params.v : 0.0;

  Rng rng(seed);
  const std::span<const double> initial(cfg.initial_freqs.data(), static_cast<std::size_t>(k));
  CountVector start = sample_multinomial(initial, cfg.pop_size, rng);
  std::vector<std::int64_t> x(start.counts().begin(), start.counts().end());

  std::vector<std::vector<std::int64_t>> states;
  std::size_t next_obs = 0;
  if (cfg.obs_times.front() == 0) {
    states.push_back(x);
    ++next_obs;
  }
  const int generations = cfg.obs_times.back() * cfg.generations_per_obs;
  const double pop = static_cast<double>(cfg.pop_size);
  Vector counts(k), fitness(k);
  std::vector<double> q(static_cast<std::size_t>(k));
  for (int g = 1; g <= generations; ++g) {
    for (Eigen::Index i = 0; i < k; ++i) counts[i] = static_cast<double>(x[static_cast<std::size_t>(i)]);
    fitness = -penalty;
    if (variant != NFDSVariant::Neutral) {
      const Vector f = cfg.loci.transpose() * counts / pop;
      fitness += cfg.loci * sigma.cwiseProduct(cfg.equilibrium_freqs - f);
    }
    const double top = fitness.maxCoeff();
    double total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) total += counts[i] * std::exp(fitness[i] - top);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double w = counts[i] * std::exp(fitness[i] - top) / total;
      q[static_cast<std::size_t>(i)] = (1.0 - params.m) * w + params.m * cfg.initial_freqs[i];
    }
    const CountVector next = sample_multinomial(q, cfg.pop_size, rng);
    std::copy(next.counts().begin(), next.counts().end(), x.begin());
    if (g % cfg.generations_per_obs == 0 && next_obs < cfg.obs_times.size() &&
        g / cfg.generations_per_obs == cfg.obs_times[next_obs]) {
      states.push_back(x);
      ++next_obs;
    }
  }
  return states;
}

Box nfds_box(NFDSVariant variant) {
  switch (variant) {
    case NFDSVariant::Neutral: return Box((Vector(2) << -7, -7).finished(), (Vector(2) << -1.6, -0.7).finished());
    case NFDSVariant::Homogeneous:
      return Box((Vector(3) << -7, -7, -7).finished(), (Vector(3) << -1.6, -0.7, -1.6).finished());
    case NFDSVariant::Heterogeneous:
      return Box((Vector(5) << -7, -7, -7, -7, 0).finished(), (Vector(5) << -1.6, -0.7, -1.6, -1.9, 1).finished());
  }
  throw ConfigError("unknown NFDS variant");
}

NFDSSimulator::NFDSSimulator(NFDSConfig cfg, NFDSVariant variant)
    : cfg_(std::move(cfg)), variant_(variant), box_(nfds_box(variant)) {
  cfg_.validate();
}

std::string NFDSSimulator::name() const { return "nfds-" + std::string(to_string(variant_)); }

std::vector<std::size_t> NFDSSimulator::block_sizes() const {
  return std::vector<std::size_t>(cfg_.obs_times.size(), cfg_.n_clusters());
}

bool NFDSSimulator::feasible(const Vector& theta) const {
  return variant_ != NFDSVariant::Heterogeneous || theta[2] > theta[3];
}

NFDSParameters NFDSSimulator::natural(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != box_.dim())
    throw DimensionError(name() + ": expected " + std::to_string(box_.dim()) + " parameters");
  if (!box_.contains(theta)) throw DomainError(name() + ": parameters outside the box");
  NFDSParameters p;
  p.m = std::exp(theta[0]);
  p.v = std::exp(theta[1]);
  if (variant_ != NFDSVariant::Neutral) p.sigma_f = std::exp(theta[2]);
  if (variant_ == NFDSVariant::Heterogeneous) {
    if (!(theta[2] > theta[3])) throw ConstraintError(name() + ": requires sigma_f > sigma_w");
    p.sigma_w = std::exp(theta[3]);
    p.p_f = theta[4];
  }
  return p;
}

CountVector NFDSSimulator::run_natural(const NFDSParameters& params, std::int64_t n, std::uint64_t seed) const {
  if (n < 0) throw DomainError("sample size must be nonnegative");
  const auto states = simulate_population(cfg_, variant_, params, seed);
  Rng rng(derive_seed(seed, 0x5A3F1EULL));
  const auto sizes = split_evenly(n, states.size());
  std::vector<std::int64_t> out;
  out.reserve(k());
  for (std::size_t b = 0; b < states.size(); ++b) {
    const auto part = sample_without_replacement(states[b], sizes[b], rng);
    out.insert(out.end(), part.begin(), part.end());
  }
  return CountVector(std::move(out));
}

CountVector NFDSSimulator::run(const Vector& theta, std::int64_t n, std::uint64_t seed) const {
  return run_natural(natural(theta), n, seed);
}

std::shared_ptr<const Simulator> nfds_simulator(const NFDSConfig& cfg, NFDSVariant variant) {
  return std::make_shared<NFDSSimulator>(cfg, variant);
}

ClusterData synthetic_cluster_data(std::uint64_t seed, std::size_t n_loci) {
  constexpr std::size_t kClusters = 41;
  Rng rng(seed);
  boost::random::gamma_distribution<double> gamma(0.7);
  std::vector<double> weights(kClusters);
  double total = 0.0;
  for (auto& w : weights) total += (w = gamma(rng));
  for (auto& w : weights) w /= total;

  ClusterData d;
  for (std::size_t i = 0; i < kClusters; ++i) {
    d.cluster_ids.push_back("SC" + std::to_string(i + 1));
    d.vaccine_type.push_back(i % 4 == 0);
  }
  const CountVector t0 = sample_multinomial(weights, 133, rng);
  d.count_t0.assign(t0.counts().begin(), t0.counts().end());

  NFDSConfig cfg = nfds_config_from_data(d, n_loci, derive_seed(seed, 1));
  const NFDSParameters truth{0.005, 0.088, 0.114, 0.002, 0.372};
  const auto states = simulate_population(cfg, NFDSVariant::Heterogeneous, truth, derive_seed(seed, 2));
  Rng sampler(derive_seed(seed, 3));
  d.count_t36 = sample_without_replacement(states[0], 203, sampler);
  d.count_t72 = sample_without_replacement(states[1], 280, sampler);
  return d;
}

}  // namespace jsdrazor
