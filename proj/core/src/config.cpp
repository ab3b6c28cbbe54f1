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

#include "jsdrazor/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jsdrazor/csv.hpp"
#include "jsdrazor/error.hpp"

namespace jsdrazor {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::NestedMultilogit: return "nested_multilogit";
    case ExperimentKind::Loglinear: return "loglinear";
    case ExperimentKind::NFDS: return "nfds";
    case ExperimentKind::Custom: return "custom";
  }
  return "?";
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, std::string_view field, std::string_view message) const {
    std::ostringstream o;
    o << source_;
    if (node.IsDefined() && node.Mark().line >= 0) o << ':' << node.Mark().line + 1 << ':' << node.Mark().column + 1;
    o << ": " << field << ": " << message;
    throw ConfigError(o.str());
  }

  template <class T>
  T scalar(const YAML::Node& node, std::string_view field) const {
    if (!node.IsScalar()) fail(node, field, "expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, field, "cannot convert '" + node.Scalar() + "'");
    }
  }

  template <class T>
  std::vector<T> list(const YAML::Node& node, std::string_view field) const {
    if (!node.IsSequence()) fail(node, field, "expected a list");
    std::vector<T> out;
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(scalar<T>(node[i], std::string(field) + "[" + std::to_string(i) + "]"));
    return out;
  }

  Vector vector(const YAML::Node& node, std::string_view field) const {
    const auto v = list<double>(node, field);
    for (double x : v)
      if (!std::isfinite(x)) fail(node, field, "entries must be finite");
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  void only_keys(const YAML::Node& node, std::string_view field, const std::set<std::string>& allowed) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, std::string(field).empty() ? key : std::string(field) + "." + key, "unknown key");
    }
  }

 private:
  std::string source_;
};

NFDSVariant parse_variant(const Reader& r, const YAML::Node& node, std::string_view field) {
  const auto name = r.scalar<std::string>(node, field);
  for (NFDSVariant v : {NFDSVariant::Neutral, NFDSVariant::Homogeneous, NFDSVariant::Heterogeneous})
    if (to_string(v) == name) return v;
  r.fail(node, field, "expected neutral, homogeneous or heterogeneous");
}

std::string nested_true_model(const Vector& theta) {
  if (theta.size() != 2) return {};
  if (theta[1] != 0.0) return "M2";
  if (theta[0] != 0.0) return "M1";
  return "M0";
}

}  // namespace

bool ExperimentConfig::wants(Criterion c) const { return std::find(criteria.begin(), criteria.end(), c) != criteria.end(); }

void ExperimentConfig::apply_paper_scale() {
  replicates = paper_replicates;
  bolfi.budget = paper_budget;
}

void ExperimentConfig::validate() const {
  if (replicates < 1) throw ConfigError("replicates: must be at least 1");
  if (n_obs.empty()) throw ConfigError("n_obs: at least one sample size is required");
  if (criteria.empty()) throw ConfigError("criteria: at least one criterion is required");
  if (settings.empty()) throw ConfigError("true_params: at least one data-generating setting is required");
  for (auto n : n_obs) {
    if (n < 1) throw ConfigError("n_obs: sample sizes must be positive");
    if (n <= 25 && (wants(Criterion::SicJsd) || wants(Criterion::SicBolfi) || wants(Criterion::Refined) ||
                    wants(Criterion::Laplace)))
      throw ConfigError("n_obs: entries must exceed 25 (8 pi) for JSD-based criteria");
  }
  if (wants(Criterion::SicBolfi)) {
    if (bolfi.init_points < 2) throw ConfigError("bolfi.init_points: must be at least 2");
    if (bolfi.budget < bolfi.init_points) throw ConfigError("bolfi.budget: must be at least init_points");
    if (bolfi.reps < 1) throw ConfigError("bolfi.reps: must be at least 1");
    if (bolfi.rule.kind == AcquisitionRule::Kind::LowerConfidenceBound && !(bolfi.rule.beta > 0.0))
      throw ConfigError("bolfi.lcb_beta: must be positive");
  }
  if (optimizer.starts < 1) throw ConfigError("optimizer.starts: must be at least 1");
  if (quadrature.nodes < 2) throw ConfigError("quadrature.nodes: must be at least 2");
  if (kind == ExperimentKind::NFDS) {
    for (Criterion c : criteria)
      if (c != Criterion::SicBolfi) throw ConfigError("criteria: the nfds experiment supports sic_bolfi only");
    if (nfds.params.size() != settings.size()) throw ConfigError("true_models: parameters missing");
  }
  if (kind == ExperimentKind::Custom && custom_models.size() < 2)
    throw ConfigError("models: a custom experiment needs at least two candidate models");
}

ExperimentConfig parse_experiment_config(std::string_view text, std::string_view source) {
  const Reader r{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string(source) + ":" + std::to_string(e.mark.line + 1) + ":" +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) r.fail(root, "<root>", "expected a mapping");
  r.only_keys(root, "",
              {"experiment", "name", "master_seed", "replicates", "n_obs", "criteria", "output_dir", "true_params",
               "true_models", "lambda_xy", "main_effect_range", "optimizer", "quadrature", "bolfi", "paper_scale",
               "models", "nfds"});

  ExperimentConfig cfg;
  if (!root["experiment"]) r.fail(root, "experiment", "missing");
  const auto kind = r.scalar<std::string>(root["experiment"], "experiment");
  if (kind == "nested_multilogit") cfg.kind = ExperimentKind::NestedMultilogit;
  else if (kind == "loglinear") cfg.kind = ExperimentKind::Loglinear;
  else if (kind == "nfds") cfg.kind = ExperimentKind::NFDS;
  else if (kind == "custom") cfg.kind = ExperimentKind::Custom;
  else r.fail(root["experiment"], "experiment", "expected nested_multilogit, loglinear, nfds or custom");

  cfg.name = std::string(to_string(cfg.kind));
  if (cfg.kind == ExperimentKind::NFDS) {
    cfg.n_obs = {500};
    cfg.criteria = {Criterion::SicBolfi};
    cfg.bolfi.rule = AcquisitionRule::max_variance();
  }
  if (root["name"]) cfg.name = r.scalar<std::string>(root["name"], "name");
  if (root["master_seed"]) cfg.master_seed = r.scalar<std::uint64_t>(root["master_seed"], "master_seed");
  if (root["replicates"]) cfg.replicates = r.scalar<int>(root["replicates"], "replicates");
  if (root["n_obs"]) cfg.n_obs = r.list<std::int64_t>(root["n_obs"], "n_obs");
  if (root["output_dir"]) cfg.output_dir = r.scalar<std::string>(root["output_dir"], "output_dir");
  if (root["main_effect_range"]) {
    cfg.main_effect_range = r.scalar<double>(root["main_effect_range"], "main_effect_range");
    if (!(cfg.main_effect_range > 0.0 && cfg.main_effect_range <= 2.0))
      r.fail(root["main_effect_range"], "main_effect_range", "must lie in (0, 2]");
  }
  if (root["criteria"]) {
    cfg.criteria.clear();
    const auto names = r.list<std::string>(root["criteria"], "criteria");
    for (std::size_t i = 0; i < names.size(); ++i) {
      try {
        const Criterion c = parse_criterion(names[i]);
        if (!cfg.wants(c)) cfg.criteria.push_back(c);
      } catch (const ConfigError&) {
        r.fail(root["criteria"][i], "criteria", "unknown criterion '" + names[i] + "'");
      }
    }
  }
  if (const auto o = root["optimizer"]) {
    r.only_keys(o, "optimizer", {"starts", "max_iter", "f_tol", "x_tol", "gradient_refine"});
    if (o["starts"]) cfg.optimizer.starts = r.scalar<int>(o["starts"], "optimizer.starts");
    if (o["max_iter"]) cfg.optimizer.max_iter = r.scalar<int>(o["max_iter"], "optimizer.max_iter");
    if (o["f_tol"]) cfg.optimizer.f_tol = r.scalar<double>(o["f_tol"], "optimizer.f_tol");
    if (o["x_tol"]) cfg.optimizer.x_tol = r.scalar<double>(o["x_tol"], "optimizer.x_tol");
    if (o["gradient_refine"]) cfg.optimizer.gradient_refine = r.scalar<bool>(o["gradient_refine"], "optimizer.gradient_refine");
  }
  if (const auto q = root["quadrature"]) {
    r.only_keys(q, "quadrature", {"nodes"});
    if (q["nodes"]) cfg.quadrature.nodes = r.scalar<int>(q["nodes"], "quadrature.nodes");
  }
  if (const auto b = root["bolfi"]) {
    r.only_keys(b, "bolfi", {"budget", "init_points", "acquisition", "lcb_beta", "reps", "n_per_sim", "refit_growth",
                             "candidates", "polish_from", "polish_max_iter", "final_reps"});
    if (b["budget"]) cfg.bolfi.budget = r.scalar<int>(b["budget"], "bolfi.budget");
    if (b["init_points"]) cfg.bolfi.init_points = r.scalar<int>(b["init_points"], "bolfi.init_points");
    if (b["acquisition"]) {
      const auto a = r.scalar<std::string>(b["acquisition"], "bolfi.acquisition");
      if (a == "lcb") cfg.bolfi.rule.kind = AcquisitionRule::Kind::LowerConfidenceBound;
      else if (a == "maxvar") cfg.bolfi.rule.kind = AcquisitionRule::Kind::MaxVariance;
      else r.fail(b["acquisition"], "bolfi.acquisition", "expected lcb or maxvar");
      if (cfg.bolfi.rule.kind == AcquisitionRule::Kind::LowerConfidenceBound && !(cfg.bolfi.rule.beta > 0.0))
        cfg.bolfi.rule.beta = 2.0;
    }
    if (b["lcb_beta"]) {
      cfg.bolfi.rule.beta = r.scalar<double>(b["lcb_beta"], "bolfi.lcb_beta");
      if (!(cfg.bolfi.rule.beta > 0.0)) r.fail(b["lcb_beta"], "bolfi.lcb_beta", "must be positive");
    }
    if (b["reps"]) cfg.bolfi.reps = r.scalar<int>(b["reps"], "bolfi.reps");
    if (b["n_per_sim"]) cfg.bolfi.n_per_sim = r.scalar<std::int64_t>(b["n_per_sim"], "bolfi.n_per_sim");
    if (b["refit_growth"]) {
      cfg.bolfi.refit_growth = r.scalar<double>(b["refit_growth"], "bolfi.refit_growth");
      if (!(cfg.bolfi.refit_growth > 1.0)) r.fail(b["refit_growth"], "bolfi.refit_growth", "must exceed 1");
    }
    if (b["candidates"]) cfg.bolfi.acquisition.candidates = r.scalar<int>(b["candidates"], "bolfi.candidates");
    if (b["polish_from"]) cfg.bolfi.acquisition.polish_from = r.scalar<int>(b["polish_from"], "bolfi.polish_from");
    if (b["polish_max_iter"])
      cfg.bolfi.acquisition.polish_max_iter = r.scalar<int>(b["polish_max_iter"], "bolfi.polish_max_iter");
    if (b["final_reps"]) {
      cfg.bolfi.final_reps = r.scalar<int>(b["final_reps"], "bolfi.final_reps");
      if (cfg.bolfi.final_reps < 0) r.fail(b["final_reps"], "bolfi.final_reps", "must be nonnegative");
    }
  }
  if (const auto p = root["paper_scale"]) {
    r.only_keys(p, "paper_scale", {"replicates", "budget"});
    if (p["replicates"]) cfg.paper_replicates = r.scalar<int>(p["replicates"], "paper_scale.replicates");
    if (p["budget"]) cfg.paper_budget = r.scalar<int>(p["budget"], "paper_scale.budget");
  }

  switch (cfg.kind) {
    case ExperimentKind::NestedMultilogit: {
      if (!root["true_params"]) r.fail(root, "true_params", "missing");
      const auto tp = root["true_params"];
      if (!tp.IsSequence()) r.fail(tp, "true_params", "expected a list of parameter vectors");
      for (std::size_t i = 0; i < tp.size(); ++i) {
        const std::string field = "true_params[" + std::to_string(i) + "]";
        const Vector theta = r.vector(tp[i], field);
        if (theta.size() != 2) r.fail(tp[i], field, "expected two parameters");
        if ((theta.array().abs() >= 3.0).any()) r.fail(tp[i], field, "parameters must lie inside (-3, 3)");
        cfg.settings.push_back({nested_true_model(theta), theta});
      }
      break;
    }
    case ExperimentKind::Loglinear: {
      if (!root["lambda_xy"]) r.fail(root, "lambda_xy", "missing");
      for (double v : r.list<double>(root["lambda_xy"], "lambda_xy")) {
        if (!(std::abs(v) < 2.0)) r.fail(root["lambda_xy"], "lambda_xy", "values must lie inside (-2, 2)");
        cfg.settings.push_back({v == 0.0 ? "LL2" : "LL3", (Vector(1) << v).finished()});
      }
      break;
    }
    case ExperimentKind::NFDS: {
      if (const auto n = root["nfds"]) {
        r.only_keys(n, "nfds", {"clusters_csv", "synthetic_seed", "n_loci", "loci_seed", "pop_size",
                                "generations_per_obs", "obs_times"});
        if (n["clusters_csv"]) cfg.nfds.clusters_csv = r.scalar<std::string>(n["clusters_csv"], "nfds.clusters_csv");
        if (n["synthetic_seed"]) cfg.nfds.synthetic_seed = r.scalar<std::uint64_t>(n["synthetic_seed"], "nfds.synthetic_seed");
        if (n["n_loci"]) cfg.nfds.n_loci = r.scalar<std::size_t>(n["n_loci"], "nfds.n_loci");
        if (n["loci_seed"]) cfg.nfds.loci_seed = r.scalar<std::uint64_t>(n["loci_seed"], "nfds.loci_seed");
        if (n["pop_size"]) cfg.nfds.pop_size = r.scalar<std::int64_t>(n["pop_size"], "nfds.pop_size");
        if (n["generations_per_obs"])
          cfg.nfds.generations_per_obs = r.scalar<int>(n["generations_per_obs"], "nfds.generations_per_obs");
        if (n["obs_times"]) cfg.nfds.obs_times = r.list<int>(n["obs_times"], "nfds.obs_times");
      }
      if (!root["true_models"]) r.fail(root, "true_models", "missing");
      const auto tm = root["true_models"];
      if (!tm.IsSequence()) r.fail(tm, "true_models", "expected a list");
      for (std::size_t i = 0; i < tm.size(); ++i) {
        const std::string field = "true_models[" + std::to_string(i) + "]";
        r.only_keys(tm[i], field, {"model", "m", "v", "sigma_f", "sigma_w", "p_f"});
        if (!tm[i]["model"]) r.fail(tm[i], field + ".model", "missing");
        const NFDSVariant variant = parse_variant(r, tm[i]["model"], field + ".model");
        NFDSParameters p;
        const auto get = [&](const char* key, double& out) {
          if (tm[i][key]) out = r.scalar<double>(tm[i][key], field + "." + key);
        };
        get("m", p.m);
        get("v", p.v);
        get("sigma_f", p.sigma_f);
        get("sigma_w", p.sigma_w);
        get("p_f", p.p_f);
        if (!(p.m >= 0.0 && p.m <= 1.0) || !(p.v >= 0.0) || !(p.sigma_f >= 0.0) || !(p.sigma_w >= 0.0) ||
            !(p.p_f >= 0.0 && p.p_f <= 1.0))
          r.fail(tm[i], field, "parameters out of range");
        if (variant == NFDSVariant::Heterogeneous && !(p.sigma_f > p.sigma_w))
          r.fail(tm[i], field, "requires sigma_f > sigma_w");
        cfg.settings.push_back({"nfds-" + std::string(to_string(variant)),
                                (Vector(5) << p.m, p.v, p.sigma_f, p.sigma_w, p.p_f).finished()});
        cfg.nfds.params.push_back(p);
      }
      break;
    }
    case ExperimentKind::Custom: {
      if (!root["models"]) r.fail(root, "models", "missing");
      const auto ms = root["models"];
      if (!ms.IsSequence()) r.fail(ms, "models", "expected a list");
      std::size_t k = 0;
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::string field = "models[" + std::to_string(i) + "]";
        r.only_keys(ms[i], field, {"name", "predictors", "active_dims", "box"});
        CustomModelSpec spec;
        if (!ms[i]["name"] || !ms[i]["predictors"] || !ms[i]["active_dims"] || !ms[i]["box"])
          r.fail(ms[i], field, "needs name, predictors, active_dims and box");
        spec.name = r.scalar<std::string>(ms[i]["name"], field + ".name");
        const auto rows = ms[i]["predictors"];
        if (!rows.IsSequence() || rows.size() < 1) r.fail(rows, field + ".predictors", "expected a list of rows");
        std::vector<Vector> pr;
        for (std::size_t j = 0; j < rows.size(); ++j)
          pr.push_back(r.vector(rows[j], field + ".predictors[" + std::to_string(j) + "]"));
        spec.predictors.resize(static_cast<Eigen::Index>(pr.size()), pr.front().size());
        for (std::size_t j = 0; j < pr.size(); ++j) {
          if (pr[j].size() != pr.front().size()) r.fail(rows[j], field + ".predictors", "rows differ in length");
          spec.predictors.row(static_cast<Eigen::Index>(j)) = pr[j].transpose();
        }
        if (k == 0) k = pr.size() + 1;
        if (pr.size() + 1 != k) r.fail(rows, field + ".predictors", "all models need the same number of categories");
        spec.active_dims = r.scalar<std::size_t>(ms[i]["active_dims"], field + ".active_dims");
        r.only_keys(ms[i]["box"], field + ".box", {"lower", "upper"});
        try {
          spec.box = Box(r.vector(ms[i]["box"]["lower"], field + ".box.lower"),
                         r.vector(ms[i]["box"]["upper"], field + ".box.upper"));
        } catch (const ConfigError& e) {
          r.fail(ms[i]["box"], field + ".box", e.what());
        }
        if (spec.box.dim() != spec.active_dims) r.fail(ms[i]["box"], field + ".box", "dimension must equal active_dims");
        cfg.custom_models.push_back(std::move(spec));
      }
      if (!root["true_models"]) r.fail(root, "true_models", "missing");
      const auto tm = root["true_models"];
      if (!tm.IsSequence()) r.fail(tm, "true_models", "expected a list");
      for (std::size_t i = 0; i < tm.size(); ++i) {
        const std::string field = "true_models[" + std::to_string(i) + "]";
        r.only_keys(tm[i], field, {"model", "theta"});
        if (!tm[i]["model"] || !tm[i]["theta"]) r.fail(tm[i], field, "needs model and theta");
        TrueSetting s{r.scalar<std::string>(tm[i]["model"], field + ".model"), r.vector(tm[i]["theta"], field + ".theta")};
        const auto it = std::find_if(cfg.custom_models.begin(), cfg.custom_models.end(),
                                     [&](const CustomModelSpec& m) { return m.name == s.model; });
        if (it == cfg.custom_models.end()) r.fail(tm[i]["model"], field + ".model", "not one of the models");
        if (static_cast<std::size_t>(s.theta.size()) != it->active_dims) r.fail(tm[i]["theta"], field + ".theta", "wrong dimension");
        cfg.settings.push_back(std::move(s));
      }
      break;
    }
  }
  if (cfg.kind != ExperimentKind::NestedMultilogit && root["true_params"])
    r.fail(root["true_params"], "true_params", "only used by nested_multilogit");

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = parse_experiment_config(text.str(), path.string());
  if (!cfg.nfds.clusters_csv.empty() && cfg.nfds.clusters_csv.is_relative())
    cfg.nfds.clusters_csv = path.parent_path() / cfg.nfds.clusters_csv;
  return cfg;
}

std::string to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "experiment" << YAML::Value << std::string(to_string(cfg.kind));
  e << YAML::Key << "name" << YAML::Value << cfg.name;
  e << YAML::Key << "master_seed" << YAML::Value << cfg.master_seed;
  e << YAML::Key << "replicates" << YAML::Value << cfg.replicates;
  e << YAML::Key << "n_obs" << YAML::Value << YAML::Flow << cfg.n_obs;
  e << YAML::Key << "criteria" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Criterion c : cfg.criteria) e << std::string(to_string(c));
  e << YAML::EndSeq;
  e << YAML::Key << "output_dir" << YAML::Value << cfg.output_dir.string();
  const auto vec = [&](const Vector& v) {
    e << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index i = 0; i < v.size(); ++i) e << format_real(v[i]);
    e << YAML::EndSeq;
  };
  switch (cfg.kind) {
    case ExperimentKind::NestedMultilogit:
      e << YAML::Key << "true_params" << YAML::Value << YAML::BeginSeq;
      for (const auto& s : cfg.settings) vec(s.theta);
      e << YAML::EndSeq;
      break;
    case ExperimentKind::Loglinear:
      e << YAML::Key << "lambda_xy" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (const auto& s : cfg.settings) e << format_real(s.theta[0]);
      e << YAML::EndSeq;
      e << YAML::Key << "main_effect_range" << YAML::Value << format_real(cfg.main_effect_range);
      break;
    case ExperimentKind::NFDS:
      e << YAML::Key << "nfds" << YAML::Value << YAML::BeginMap;
      e << YAML::Key << "clusters_csv" << YAML::Value << cfg.nfds.clusters_csv.string();
      e << YAML::Key << "synthetic_seed" << YAML::Value << cfg.nfds.synthetic_seed;
      e << YAML::Key << "n_loci" << YAML::Value << cfg.nfds.n_loci;
      e << YAML::Key << "loci_seed" << YAML::Value << cfg.nfds.loci_seed;
      e << YAML::Key << "pop_size" << YAML::Value << cfg.nfds.pop_size;
      e << YAML::Key << "generations_per_obs" << YAML::Value << cfg.nfds.generations_per_obs;
      e << YAML::Key << "obs_times" << YAML::Value << YAML::Flow << cfg.nfds.obs_times;
      e << YAML::EndMap;
      e << YAML::Key << "true_models" << YAML::Value << YAML::BeginSeq;
      for (std::size_t i = 0; i < cfg.settings.size(); ++i) {
        const auto& p = cfg.nfds.params[i];
        e << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "model" << YAML::Value << cfg.settings[i].model.substr(5);
        e << YAML::Key << "m" << YAML::Value << format_real(p.m);
        e << YAML::Key << "v" << YAML::Value << format_real(p.v);
        e << YAML::Key << "sigma_f" << YAML::Value << format_real(p.sigma_f);
        e << YAML::Key << "sigma_w" << YAML::Value << format_real(p.sigma_w);
        e << YAML::Key << "p_f" << YAML::Value << format_real(p.p_f);
        e << YAML::EndMap;
      }
      e << YAML::EndSeq;
      break;
    case ExperimentKind::Custom:
      e << YAML::Key << "models" << YAML::Value << YAML::BeginSeq;
      for (const auto& m : cfg.custom_models) {
        e << YAML::BeginMap << YAML::Key << "name" << YAML::Value << m.name << YAML::Key << "predictors" << YAML::Value
          << YAML::BeginSeq;
        for (Eigen::Index r = 0; r < m.predictors.rows(); ++r) vec(m.predictors.row(r).transpose());
        e << YAML::EndSeq << YAML::Key << "active_dims" << YAML::Value << m.active_dims;
        e << YAML::Key << "box" << YAML::Value << YAML::BeginMap << YAML::Key << "lower" << YAML::Value;
        vec(m.box.lower());
        e << YAML::Key << "upper" << YAML::Value;
        vec(m.box.upper());
        e << YAML::EndMap << YAML::EndMap;
      }
      e << YAML::EndSeq;
      e << YAML::Key << "true_models" << YAML::Value << YAML::BeginSeq;
      for (const auto& s : cfg.settings) {
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "model" << YAML::Value << s.model << YAML::Key << "theta"
          << YAML::Value;
        vec(s.theta);
        e << YAML::EndMap;
      }
      e << YAML::EndSeq;
      break;
  }
  e << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "starts" << YAML::Value << cfg.optimizer.starts;
  e << YAML::Key << "max_iter" << YAML::Value << cfg.optimizer.max_iter;
  e << YAML::Key << "f_tol" << YAML::Value << format_real(cfg.optimizer.f_tol);
  e << YAML::Key << "x_tol" << YAML::Value << format_real(cfg.optimizer.x_tol);
  e << YAML::Key << "gradient_refine" << YAML::Value << cfg.optimizer.gradient_refine;
  e << YAML::EndMap;
  e << YAML::Key << "quadrature" << YAML::Value << YAML::BeginMap << YAML::Key << "nodes" << YAML::Value
    << cfg.quadrature.nodes << YAML::EndMap;
  e << YAML::Key << "bolfi" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "budget" << YAML::Value << cfg.bolfi.budget;
  e << YAML::Key << "init_points" << YAML::Value << cfg.bolfi.init_points;
  e << YAML::Key << "acquisition" << YAML::Value
    << (cfg.bolfi.rule.kind == AcquisitionRule::Kind::MaxVariance ? "maxvar" : "lcb");
  if (cfg.bolfi.rule.kind == AcquisitionRule::Kind::LowerConfidenceBound)
    e << YAML::Key << "lcb_beta" << YAML::Value << format_real(cfg.bolfi.rule.beta);
  e << YAML::Key << "reps" << YAML::Value << cfg.bolfi.reps;
  e << YAML::Key << "n_per_sim" << YAML::Value << cfg.bolfi.n_per_sim;
  e << YAML::Key << "refit_growth" << YAML::Value << format_real(cfg.bolfi.refit_growth);
  e << YAML::Key << "candidates" << YAML::Value << cfg.bolfi.acquisition.candidates;
  e << YAML::Key << "polish_from" << YAML::Value << cfg.bolfi.acquisition.polish_from;
  e << YAML::Key << "polish_max_iter" << YAML::Value << cfg.bolfi.acquisition.polish_max_iter;
  e << YAML::Key << "final_reps" << YAML::Value << cfg.bolfi.final_reps;
  e << YAML::EndMap;
  e << YAML::Key << "paper_scale" << YAML::Value << YAML::BeginMap << YAML::Key << "replicates" << YAML::Value
    << cfg.paper_replicates << YAML::Key << "budget" << YAML::Value << cfg.paper_budget << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

ExperimentConfig preset_config(std::string_view name) {
  if (name == "experiment1") {
    return parse_experiment_config(R"(experiment: nested_multilogit
name: experiment1
master_seed: 1
replicates: 20
n_obs: [100, 1000]
criteria: [sic, sic_jsd, sic_bolfi]
output_dir: out/experiment1
true_params: [[0, 0], [0.2, 0], [0.7, 0], [0.2, 0.2], [0.7, 0.2], [0.2, 0.7], [0.7, 0.7]]
bolfi: {budget: 200, acquisition: lcb, lcb_beta: 2}
paper_scale: {replicates: 100, budget: 1000}
)",
                                   "experiment1");
  }
  if (name == "experiment2") {
    return parse_experiment_config(R"(experiment: loglinear
name: experiment2
master_seed: 2
replicates: 20
n_obs: [100, 1000]
criteria: [sic, sic_jsd, sic_bolfi]
output_dir: out/experiment2
lambda_xy: [-0.5, -0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
main_effect_range: 1.0
bolfi: {budget: 200, acquisition: lcb, lcb_beta: 2}
paper_scale: {replicates: 100, budget: 2000}
)",
                                   "experiment2");
  }
  if (name == "experiment3") {
    return parse_experiment_config(R"(experiment: nfds
name: experiment3
master_seed: 3
replicates: 20
n_obs: [500]
criteria: [sic_bolfi]
output_dir: out/experiment3
nfds: {n_loci: 1000, pop_size: 100000}
true_models:
  - {model: neutral, m: 0.007, v: 0.05}
  - {model: homogeneous, m: 0.007, v: 0.05, sigma_f: 0.007}
  - {model: heterogeneous, m: 0.005, v: 0.088, sigma_f: 0.114, sigma_w: 0.002, p_f: 0.372}
bolfi: {budget: 200, acquisition: lcb, lcb_beta: 2, reps: 5, final_reps: 100}
paper_scale: {replicates: 100, budget: 2000}
)",
                                   "experiment3");
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace jsdrazor
