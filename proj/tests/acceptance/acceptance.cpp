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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jsdrazor/config.hpp"
#include "jsdrazor/csv.hpp"
#include "jsdrazor/experiment.hpp"
#include "jsdrazor/validate.hpp"

namespace {

using namespace jsdrazor;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Options {
  std::set<int> only;
  int jobs = 1;
  std::filesystem::path out = "acceptance_out";
  bool full_budget = false;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

class Runs {
 public:
  explicit Runs(const Options& o) : options_(o) {}

  const ExperimentResult& experiment1() { return cached(e1_, e1_cfg_, "experiment1"); }
  const ExperimentResult& experiment2() { return cached(e2_, e2_cfg_, "experiment2"); }
  const ExperimentConfig& experiment1_config() { return e1_cfg_; }
  const ExperimentConfig& experiment2_config() { return e2_cfg_; }

  ExperimentResult run(const ExperimentConfig& cfg, const std::string& label) const {
    RunOptions ro;
    ro.jobs = options_.jobs;
    const ExperimentResult r = run_experiment(cfg, ro);
    write_experiment_outputs(r, cfg, options_.out / label);
    return r;
  }

 private:
  const ExperimentResult& cached(std::optional<ExperimentResult>& slot, ExperimentConfig& cfg, const char* name) {
    if (!slot) {
      cfg = preset_config(name);
      slot = run(cfg, name);
    }
    return *slot;
  }

  const Options& options_;
  std::optional<ExperimentResult> e1_, e2_;
  ExperimentConfig e1_cfg_, e2_cfg_;
};

std::size_t model_index(const ExperimentResult& r, const std::string& name) {
  const auto it = std::find(r.model_names.begin(), r.model_names.end(), name);
  if (it == r.model_names.end()) throw std::runtime_error("no model named " + name);
  return static_cast<std::size_t>(it - r.model_names.begin());
}

std::size_t n_obs_index(const ExperimentResult& r, std::int64_t n) {
  const auto it = std::find(r.n_obs.begin(), r.n_obs.end(), n);
  if (it == r.n_obs.end()) throw std::runtime_error("experiment did not run n_obs=" + std::to_string(n));
  return static_cast<std::size_t>(it - r.n_obs.begin());
}

Outcome property(const PropertyResult& p, double limit_seconds) {
  Outcome o;
  o.passed = p.passed && p.seconds < limit_seconds;
  o.detail = p.name + " (" + std::to_string(p.checked) + " checked, " + std::to_string(p.violations) +
             " violations, " + p.detail + ")";
  std::replace(o.detail.begin(), o.detail.end(), '\n', ' ');
  if (p.seconds >= limit_seconds) o.detail += " exceeded " + fixed(limit_seconds, 0) + " s";
  return o;
}

Outcome all_of(const std::vector<Outcome>& parts) {
  Outcome o{true, ""};
  for (const auto& p : parts) {
    o.passed = o.passed && p.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += p.detail;
  }
  return o;
}

Outcome criterion1(Runs&, const Options&) {
  return property(check_divergence_properties(10000, 20190601), 10.0);
}

Outcome criterion2(Runs&, const Options&) {
  const auto start = Clock::now();
  const PropertyResult fisher = check_fisher_information(100, 20190601);
  const PropertyResult derivatives = check_jsd_derivatives(100, 20190601);
  Outcome o = all_of({property(fisher, 30.0), property(derivatives, 30.0)});
  const double total = seconds_since(start);
  if (total >= 30.0) {
    o.passed = false;
    o.detail += "; total " + fixed(total, 1) + " s exceeded 30 s";
  }
  return o;
}

Outcome criterion3(Runs&, const Options&) { return property(check_model_volume(50, 20190601), 60.0); }

Outcome criterion4(Runs& runs, const Options&) {
  const ExperimentResult& e1 = runs.experiment1();
  const ExperimentResult& e2 = runs.experiment2();
  const std::int64_t checked = e1.razor_instances + e2.razor_instances;
  const std::int64_t violations = e1.razor_violations + e2.razor_violations;
  Outcome o;
  o.passed = checked >= 1000 && violations == 0;
  o.detail = std::to_string(checked) + " fitted instances, " + std::to_string(violations) + " with SIC-JSD >= SIC";
  return o;
}

Outcome criterion5(Runs& runs, const Options&) {
  const std::vector<double> sic{1.00, 1.00, 1.00, 0.96, 0.41, 0.00, 0.43, 0.95, 1.00, 1.00, 1.00};
  const std::vector<double> sic_jsd{1.00, 1.00, 1.00, 0.95, 0.39, 0.00, 0.41, 0.95, 1.00, 1.00, 1.00};
  ExperimentConfig cfg = preset_config("experiment2");
  cfg.apply_paper_scale();
  cfg.criteria = {Criterion::Sic, Criterion::SicJsd};
  const auto start = Clock::now();
  const ExperimentResult r = runs.run(cfg, "experiment2_paper_scale");
  const double elapsed = seconds_since(start);
  if (r.setting_labels.size() != sic.size()) return {false, "unexpected number of lambda_xy settings"};

  const std::size_t ll3 = model_index(r, "LL3");
  const std::size_t big = n_obs_index(r, 1000);
  const std::size_t small = n_obs_index(r, 100);
  double worst = 0.0;
  std::string worst_cell;
  bool table_ok = true;
  for (std::size_t s = 0; s < sic.size(); ++s) {
    for (auto [c, target] : {std::pair{Criterion::Sic, sic[s]}, std::pair{Criterion::SicJsd, sic_jsd[s]}}) {
      const double rate = r.rate(s, big, c).rates[ll3];
      const double err = std::abs(rate - target);
      if (err > worst) {
        worst = err;
        worst_cell = std::string(to_string(c)) + " " + r.setting_labels[s] + " rate " + fixed(rate, 2) + " vs " +
                     fixed(target, 2);
      }
      if (err > 0.07 + 1e-12) table_ok = false;
    }
  }
  bool trend_ok = true;
  std::string trend_miss;
  for (std::size_t s = 0; s < sic.size(); ++s) {
    if (s == 5) continue;
    const double a = r.rate(s, small, Criterion::SicJsd).rates[ll3];
    const double b = r.rate(s, small, Criterion::Sic).rates[ll3];
    if (!(a > b)) {
      trend_ok = false;
      trend_miss += " " + r.setting_labels[s] + " (" + fixed(a, 2) + " vs " + fixed(b, 2) + ")";
    }
  }
  Outcome o;
  o.passed = table_ok && trend_ok;
  o.detail = std::to_string(cfg.replicates) + " replicates; n=1000 max deviation " + fixed(worst, 2) + " at " +
             worst_cell + "; n=100 SIC-JSD above SIC at every nonzero lambda_xy: " + (trend_ok ? "yes" : "no");
  if (!trend_ok) o.detail += " [not at" + trend_miss + "]";
  o.detail += "; " + fixed(elapsed, 1) + " s";
  if (!table_ok) {
    ExperimentConfig steep = cfg;
    steep.settings = {cfg.settings[4], cfg.settings[6]};
    steep.n_obs = {1000};
    steep.replicates = 2000;
    const ExperimentResult d = runs.run(steep, "experiment2_steep_cells");
    o.detail += "; diagnostic, not scored: 2000 replicates at lambda_xy=-0.1/0.1 give SIC " +
                fixed(d.rate(0, 0, Criterion::Sic).rates[ll3], 3) + "/" + fixed(d.rate(1, 0, Criterion::Sic).rates[ll3], 3) +
                ", SIC-JSD " + fixed(d.rate(0, 0, Criterion::SicJsd).rates[ll3], 3) + "/" +
                fixed(d.rate(1, 0, Criterion::SicJsd).rates[ll3], 3);
  }
  return o;
}

Outcome criterion6(Runs& runs, const Options&) {
  const ExperimentResult& r = runs.experiment1();
  const ExperimentConfig& cfg = runs.experiment1_config();
  const std::size_t small = n_obs_index(r, 100);
  const std::size_t big = n_obs_index(r, 1000);
  int cells = 0;
  std::string misses;
  for (std::size_t s = 0; s < r.setting_labels.size(); ++s) {
    for (Criterion c : cfg.criteria) {
      ++cells;
      const double a = r.rate(s, small, c).true_model_rate;
      const double b = r.rate(s, big, c).true_model_rate;
      if (b < a) misses += " " + std::string(to_string(c)) + "@" + r.setting_labels[s] + "(" + fixed(a, 2) + "->" +
                           fixed(b, 2) + ")";
    }
  }
  Outcome o;
  o.passed = misses.empty();
  o.detail = std::to_string(cells) + " (theta, criterion) cells, " + std::to_string(cfg.replicates) +
             " replicates; true-model rate at n=1000 >= n=100 " + (misses.empty() ? "everywhere" : "fails at" + misses);
  return o;
}

Outcome bolfi_agreement(const ExperimentResult& r, double required, const std::string& label) {
  const std::size_t big = n_obs_index(r, 1000);
  std::map<std::pair<std::size_t, int>, std::size_t> jsd_choice;
  for (const auto& row : r.selections)
    if (row.n_obs_index == big && row.criterion == Criterion::SicJsd)
      jsd_choice[{row.setting, row.replicate}] = row.selected;
  int total = 0, agree = 0;
  for (const auto& row : r.selections) {
    if (row.n_obs_index != big || row.criterion != Criterion::SicBolfi) continue;
    ++total;
    if (jsd_choice.at({row.setting, row.replicate}) == row.selected) ++agree;
  }
  Outcome o;
  const double share = total ? static_cast<double>(agree) / total : 0.0;
  o.passed = total > 0 && share >= required;
  o.detail = label + ": SIC-BOLFI agrees with SIC-JSD in " + std::to_string(agree) + "/" + std::to_string(total) +
             " replicates (" + fixed(100 * share, 1) + "%, required " + fixed(100 * required, 0) + "%)";
  return o;
}

Outcome criterion7(Runs& runs, const Options& options) {
  std::vector<Outcome> parts{bolfi_agreement(runs.experiment2(), 0.80, "budget " +
                                                 std::to_string(runs.experiment2_config().bolfi.budget))};
  if (options.full_budget) {
    ExperimentConfig cfg = preset_config("experiment2");
    cfg.apply_paper_scale();
    cfg.n_obs = {1000};
    cfg.criteria = {Criterion::SicJsd, Criterion::SicBolfi};
    parts.push_back(bolfi_agreement(runs.run(cfg, "experiment2_full_budget"), 0.90,
                                    "budget " + std::to_string(cfg.bolfi.budget)));
  }
  return all_of(parts);
}

Outcome criterion8(Runs&, const Options&) {
  return all_of({property(check_evidence_chain(100, 20190601), 600.0), property(check_acceptance_limit(), 600.0)});
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Outcome criterion9(Runs& runs, const Options&) {
  const ExperimentConfig cfg = preset_config("experiment3");
  const ExperimentResult r = runs.run(cfg, "experiment3");
  const std::size_t neutral = model_index(r, "nfds-neutral");
  const std::size_t homogeneous = model_index(r, "nfds-homogeneous");
  const std::size_t heterogeneous = model_index(r, "nfds-heterogeneous");
  Outcome o{true, std::to_string(cfg.replicates) + " replicates"};
  for (std::size_t s = 0; s < r.setting_labels.size(); ++s) {
    const std::size_t truth = r.true_model[s];
    const double rate = r.rate(s, 0, Criterion::SicBolfi).true_model_rate;
    if (truth == neutral || truth == homogeneous) {
      const bool majority = rate > 0.5;
      o.passed = o.passed && majority;
      o.detail += "; " + r.model_names[truth] + " data: true-model rate " + fixed(rate, 2);
    } else if (truth == heterogeneous) {
      std::vector<double> het, neu;
      for (const auto& row : r.selections) {
        if (row.setting != s || row.criterion != Criterion::SicBolfi) continue;
        het.push_back(row.objectives[heterogeneous]);
        neu.push_back(row.objectives[neutral]);
      }
      const double mh = median(het), mn = median(neu);
      o.passed = o.passed && mh < mn;
      o.detail += "; heterogeneous data: median expected JSD heterogeneous " + fixed(mh, 5) + " vs neutral " +
                  fixed(mn, 5) + " (true-model rate " + fixed(rate, 2) + ")";
    }
  }
  return o;
}

Outcome criterion10(Runs& runs, const Options& options) {
  Outcome o{true, ""};
  for (const char* name : {"experiment1", "experiment2", "experiment3"}) {
    ExperimentConfig cfg = preset_config(name);
    cfg.replicates = std::string(name) == "experiment3" ? 1 : 2;
    const auto first = options.out / "determinism" / (std::string(name) + "_a");
    const auto second = options.out / "determinism" / (std::string(name) + "_b");
    RunOptions serial;
    RunOptions parallel;
    parallel.jobs = std::max(2, options.jobs);
    write_experiment_outputs(run_experiment(cfg, serial), cfg, first);
    write_experiment_outputs(run_experiment(cfg, parallel), cfg, second);
    bool same = true;
    for (const char* file : {"selections.csv", "rates.csv"}) {
      const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
      };
      const std::string a = slurp(first / file);
      same = same && !a.empty() && a == slurp(second / file);
    }
    o.passed = o.passed && same;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + name + (same ? " identical" : " DIFFERS");
  }
  (void)runs;
  return o;
}

struct Criterion_ {
  int id;
  const char* name;
  std::function<Outcome(Runs&, const Options&)> run;
};

Options parse_args(int argc, char** argv) {
  Options o;
  const unsigned hw = std::thread::hardware_concurrency();
  o.jobs = hw ? static_cast<int>(hw) : 1;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    const auto value = [&]() -> std::string {
      if (i + 1 >= argc) throw std::runtime_error(a + " needs a value");
      return argv[++i];
    };
    if (a == "--only") {
      std::stringstream s(value());
      for (std::string part; std::getline(s, part, ',');) o.only.insert(std::stoi(part));
    } else if (a == "--jobs") {
      o.jobs = std::max(1, std::stoi(value()));
    } else if (a == "--out") {
      o.out = value();
    } else if (a == "--full-budget") {
      o.full_budget = true;
    } else {
      throw std::runtime_error("unknown argument " + a +
                               " (use --only N[,M..], --jobs J, --out DIR, --full-budget)");
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Options options;
  try {
    options = parse_args(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  const std::vector<Criterion_> criteria{
      {1, "divergence properties", criterion1},
      {2, "calculus suite", criterion2},
      {3, "model volume", criterion3},
      {4, "razor inequality", criterion4},
      {5, "experiment 2 reproduction", criterion5},
      {6, "experiment 1 consistency trend", criterion6},
      {7, "BOLFI fidelity", criterion7},
      {8, "evidence oracles", criterion8},
      {9, "NFDS self-consistency", criterion9},
      {10, "determinism", criterion10},
  };
  Runs runs(options);
  int failed = 0;
  for (const auto& c : criteria) {
    if (!options.only.empty() && !options.only.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run(runs, options);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail
              << " [" << fixed(seconds_since(start), 1) << " s]" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
