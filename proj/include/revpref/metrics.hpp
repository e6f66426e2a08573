//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revpref/core.hpp"

namespace revpref {

enum class SteeringClass {
  kWrong,
  kUnder,
  kTarget,
  kOver,
};

std::string_view to_string(SteeringClass c) noexcept;

enum class Intervention {
  kCostPrompt,
  kProbabilityPrompt,
};

std::string_view to_string(Intervention i) noexcept;

// Predicted and realized percent loss reductions for one benchmark. An
// empty value marks a zero-loss denominator.
struct CounterfactualReport {
  std::string benchmark_id;
  Intervention intervention = Intervention::kCostPrompt;
  std::optional<double> target_prediction;
  std::optional<double> steered_prediction;
  std::optional<double> realized_effect;
};

// Belief of a case under the chosen source; throws kIncompleteRecord if a
// true posterior is requested but absent.
Belief belief_of(const CaseRecord &record, BeliefSource source);

// Percentage of cases whose recorded action under `regime` is the
// expected-loss minimizer for `cost` under the chosen beliefs.
double ilfc(std::span<const CaseRecord> cases, const DecisionRegime &regime,
            BeliefSource belief_source, const CostVector &cost);

// Same score with a per-case cost vector, e.g. case-specific self-reports.
double ilfc(std::span<const CaseRecord> cases, const DecisionRegime &regime,
            BeliefSource belief_source,
            const std::function<CostVector(const CaseRecord &)> &cost_of);

// Percent reduction in benchmark loss when decisions made by a rational
// agent with (from_cost, from_beliefs) are replaced by those of one with
// (to_cost, to_beliefs).
double counterfactual_reduction(const BenchmarkCost &benchmark,
                                const CostVector &from_cost,
                                std::span<const Belief> from_beliefs,
                                const CostVector &to_cost,
                                std::span<const Belief> to_beliefs,
                                std::span<const State> states);

double realized_reduction(const BenchmarkCost &benchmark,
                          std::span<const Action> baseline_actions,
                          std::span<const Action> prompted_actions,
                          std::span<const State> states);

double steering_progress(double baseline_ratio, double steered_ratio,
                         double true_ratio);

SteeringClass classify_steering(double progress);

double pearson_r(std::span<const double> x, std::span<const double> y);

double rmsd(std::span<const Belief> a, std::span<const Belief> b);

// Steering outcomes of one cell. Entries with an undefined progress value
// (baseline already at the target) are counted, not classified.
struct SteeringTally {
  std::array<int, 4> counts {};  // indexed by SteeringClass
  int excluded = 0;

  void add(double baseline_ratio, double steered_ratio, double true_ratio);
  int total() const noexcept;
};

}  // namespace revpref
