//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revpref/core.hpp"
#include "revpref/dataset_io.hpp"
#include "revpref/estimator.hpp"
#include "revpref/metrics.hpp"
#include "revpref/simulator.hpp"

namespace revpref {

struct AnalysisConfig {
  // Regimes to fit; empty selects every regime that appears in the data.
  std::vector<DecisionRegime> regimes;
  // Belief object used when fitting each regime. Unlisted regimes use the
  // elicited belief, except the true-probability prompt which uses p_true.
  std::map<DecisionRegime, BeliefSource> fit_beliefs;
  FitOptions fit;
  // 0 skips the bootstrap intervals.
  int n_resamples = 1000;
  std::uint64_t seed = 0;
  int threads = 0;
  // Analyse each domain separately instead of pooling all records.
  bool by_domain = false;

  bool consistency = true;
  bool steering = true;
  bool counterfactual = true;
  std::optional<SensitivitySpec> sensitivity;

  BeliefSource fit_belief(const DecisionRegime &regime) const;

  // Keys: regimes (list of regime keys), fit_beliefs (object regime key ->
  // "elicited"|"true"), n_resamples, seed, threads, by_domain, consistency,
  // steering, counterfactual, fit {max_iterations, gradient_tolerance,
  // lower_bound, upper_bound, initial_cost}, sensitivity {noise_sds,
  // n_repetitions, seed, band_resamples} or null.
  static AnalysisConfig from_json(std::string_view text);
};

struct FitRow {
  std::string domain;
  DecisionRegime regime;
  BeliefSource belief_source = BeliefSource::kElicited;
  int n = 0;
  FitResult fit;
  std::optional<RatioInterval> fn_fp;
  std::optional<RatioInterval> defer_fp;
};

struct IlfcRow {
  std::string domain;
  // "baseline", "elicited_p", "true_p", "cost:<id>", "cost" (all cost
  // prompts pooled), "self_report_global", "self_report_case".
  std::string column;
  DecisionRegime actions_regime;
  BeliefSource belief_source = BeliefSource::kElicited;
  int n = 0;
  double ilfc = 0.0;
};

struct SteeringRow {
  std::string domain;
  std::string benchmark_id;
  RatioName ratio = RatioName::kFnFp;
  double baseline_ratio = 0.0;
  double steered_ratio = 0.0;
  double true_ratio = 0.0;
  std::optional<double> progress;  // empty when baseline == target
  std::optional<SteeringClass> steering_class;
};

struct SteeringCountRow {
  std::string domain;
  std::string ratio;  // "fn_fp", "defer_fp" or "pooled"
  SteeringTally tally;
};

struct CounterfactualRow {
  std::string domain;
  int n = 0;
  CounterfactualReport report;
};

struct CorrelationRow {
  std::string domain;
  Intervention intervention = Intervention::kCostPrompt;
  std::string prediction;  // "target" or "steered"
  int n = 0;
  std::optional<double> pearson_r;
  int excluded = 0;
};

struct SensitivitySection {
  std::string domain;
  DecisionRegime regime;
  SensitivityTable table;
};

struct ReportBundle {
  std::uint64_t seed = 0;
  int n_resamples = 0;
  std::vector<FitRow> fitted_ratios;
  std::vector<IlfcRow> ilfc_table;
  std::vector<SteeringRow> steering_table;
  std::vector<SteeringCountRow> steering_counts;
  std::vector<CounterfactualRow> counterfactual_table;
  std::vector<CorrelationRow> correlations;
  std::vector<SensitivitySection> sensitivity_table;
};

ReportBundle run_analysis(const DatasetFile &dataset,
                          const AnalysisConfig &config);

enum class ReportFormat {
  kJson,
  kCsv,
  kFigureData,
};

ReportFormat report_format_from_string(std::string_view text);

// Numbers rounded to six significant digits.
std::string render_json(const ReportBundle &bundle);

// File name -> contents. Delimited tables use six significant digits;
// figure data keeps full double precision as (x, y, group) rows.
std::map<std::string, std::string> render_csv_tables(
    const ReportBundle &bundle);
std::map<std::string, std::string> render_figure_data(
    const ReportBundle &bundle);

// JSON is written to `destination` as a file; the other formats write one
// file per table into the `destination` directory.
void emit_report(const ReportBundle &bundle, ReportFormat format,
                 const std::filesystem::path &destination);

}  // namespace revpref
