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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jsdrazor/categorical.hpp"
#include "jsdrazor/estimate.hpp"
#include "jsdrazor/model.hpp"

namespace jsdrazor {

enum class Criterion { SicJsd, Sic, Refined, Laplace, SicBolfi };

std::string_view to_string(Criterion c);
/// Accepts "sic_jsd", "sic", "refined", "laplace", "sic_bolfi".
Criterion parse_criterion(std::string_view name);

/// d ln sqrt(n / 8 pi). Throws SampleTooSmall for n <= 25.
double sic_jsd_penalty(std::size_t d, std::int64_t n);

/// 2 n D_JS(p_hat, p(theta_hat)) + d ln sqrt(n / 8 pi).
double sic_jsd(const ParametricModel& m, const CountVector& c, const FitResult& fit);

/// -ln P(D) + (d/2) ln n for a likelihood fit from mle_fit.
double sic(const ParametricModel& m, const CountVector& c, const FitResult& mle);

struct QuadratureSettings {
  int nodes = 64;
};

struct VolumeResult {
  double volume = 1.0;
  /// |V(nodes) - V(nodes/2)|; flagged when above 1e-4.
  double richardson_error = 0.0;
  bool quadrature_warning = false;
};

/// V(Theta) = integral of sqrt(det I(theta)) over the box; 1 for d = 0.
/// Throws UnsupportedDimension for d > 3.
VolumeResult model_volume(const ParametricModel& m, const QuadratureSettings& q = {});

struct RefinedPenalty {
  double value = 0.0;
  double log_volume = 0.0;
  bool quadrature_warning = false;
};

/// (d/2) ln(n / 2 pi) + ln V(Theta) - d ln 2.
RefinedPenalty refined_penalty(const ParametricModel& m, const CountVector& c, const FitResult& fit,
                               const QuadratureSettings& q = {});

/// Laplace approximation of -ln R_n with the exact JSD Hessian:
/// 2 n D_JS + (d/2) ln(n / 2 pi) + ln V + (1/2) ln(det H / det I).
double razor_laplace(const ParametricModel& m, const CountVector& c, const FitResult& fit,
                     const QuadratureSettings& q = {});

/// Per-model inputs to selection. Criterion lists that were not computed stay
/// empty in the report.
struct ModelScore {
  std::string name;
  std::size_t d = 0;
  FitResult fit;
  std::optional<double> sic_jsd;
  std::optional<double> sic;
  std::optional<double> refined;
  std::optional<double> laplace;
  std::optional<double> sic_bolfi;
};

struct ScoreReport {
  std::vector<std::string> model_names;
  std::vector<std::size_t> dims;
  std::vector<double> sic_jsd;
  std::vector<double> sic;
  std::vector<double> refined;
  std::vector<double> laplace;
  std::vector<double> sic_bolfi;
  std::vector<FitResult> fits;
  Criterion criterion = Criterion::SicJsd;
  std::size_t selected_index = 0;
  std::int64_t n_o = 0;

  const std::vector<double>& values(Criterion c) const;
};

/// Argmin with ties (within 1e-12) broken by smaller d, then smaller index.
std::size_t argmin_with_tiebreak(std::span<const double> values, std::span<const std::size_t> dims);

/// Assembles the report and selects by `primary`. Throws ConfigError when the
/// list is empty or the primary criterion is missing for some model.
ScoreReport select(std::span<const ModelScore> scores, std::int64_t n_o,
                   Criterion primary = Criterion::SicJsd);

/// Fits every model to the counts and scores the requested criteria.
/// sic_bolfi is not handled here.
ScoreReport score_models(std::span<const ParametricModel> models, const CountVector& c,
                         std::span<const Criterion> criteria, Criterion primary,
                         const OptimizerSettings& settings = {}, std::uint64_t seed = 0,
                         const QuadratureSettings& q = {});

std::string to_json(const ScoreReport& r);
ScoreReport score_report_from_json(std::string_view text);

}  // namespace jsdrazor
