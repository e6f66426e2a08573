//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace revpref {

// Declaration order is the tie-breaking order used by optimal_action().
enum class Action : int {
  kDiagnosePositive = 0,
  kDiagnoseNegative = 1,
  kDefer = 2,
};

inline constexpr std::size_t kNumActions = 3;
inline constexpr std::array<Action, kNumActions> kAllActions = {
  Action::kDiagnosePositive,
  Action::kDiagnoseNegative,
  Action::kDefer,
};

constexpr std::size_t index_of(Action a) noexcept {
  return static_cast<std::size_t>(a);
}

std::string_view to_string(Action a) noexcept;

enum class State : int {
  kAbsent = 0,
  kPresent = 1,
};

// Probability that the condition is present (State::kPresent).
class Belief {
public:
  Belief() = default;
  explicit Belief(double p);

  double p() const noexcept { return p_; }

  friend auto operator<=>(const Belief &, const Belief &) = default;

private:
  double p_ = 0.0;
};

// Loss weights for a false positive, a false negative and a deferral.
class CostVector {
public:
  CostVector() = default;
  CostVector(double c_fp, double c_fn, double c_defer);

  double c_fp() const noexcept { return c_fp_; }
  double c_fn() const noexcept { return c_fn_; }
  double c_defer() const noexcept { return c_defer_; }

  // Ratios against the false-positive cost; throw kUndefinedRatio if
  // c_fp == 0.
  double fn_fp() const;
  double defer_fp() const;

  CostVector scaled(double lambda) const;

  std::array<double, 3> to_array() const noexcept {
    return { c_fp_, c_fn_, c_defer_ };
  }

  friend bool operator==(const CostVector &, const CostVector &) = default;

private:
  double c_fp_ = 1.0;
  double c_fn_ = 1.0;
  double c_defer_ = 1.0;
};

// Which probability a case is evaluated under: the agent's elicited belief
// or the reference posterior.
enum class BeliefSource {
  kElicited,
  kTrue,
};

std::string_view to_string(BeliefSource source) noexcept;
BeliefSource belief_source_from_string(std::string_view text);

struct DecisionRegime {
  enum class Kind : int {
    kBaseline,
    kElicitedProbPrompt,
    kTrueProbPrompt,
    kCostFunctionPrompt,
    kSelfReportGlobal,
    kSelfReportCase,
  };

  Kind kind = Kind::kBaseline;
  std::string benchmark_id;  // only for kCostFunctionPrompt

  static DecisionRegime baseline() { return { Kind::kBaseline, {} }; }
  static DecisionRegime elicited_prob() {
    return { Kind::kElicitedProbPrompt, {} };
  }
  static DecisionRegime true_prob() { return { Kind::kTrueProbPrompt, {} }; }
  static DecisionRegime cost_prompt(std::string id) {
    return { Kind::kCostFunctionPrompt, std::move(id) };
  }

  // "baseline", "elicited_p", "true_p", "cost:<id>", "self_report_global",
  // "self_report_case".
  std::string key() const;
  static DecisionRegime from_key(std::string_view key);

  friend auto operator<=>(const DecisionRegime &,
                          const DecisionRegime &) = default;
};

struct BenchmarkCost {
  std::string id;
  CostVector cost;

  friend bool operator==(const BenchmarkCost &,
                         const BenchmarkCost &) = default;
};

struct CaseRecord {
  std::string case_id;
  std::string domain;
  Belief p_elicited;
  std::optional<Belief> p_true;
  std::optional<State> theta;
  std::map<DecisionRegime, Action> actions;
  // Answer to the forced-choice line of a decision response; kept for
  // regimes where the agent deferred.
  std::map<DecisionRegime, Action> forced_choices;
  std::optional<CostVector> self_report_global;
  std::optional<CostVector> self_report_case;
  std::optional<std::vector<Belief>> belief_replicates;

  friend bool operator==(const CaseRecord &, const CaseRecord &) = default;
};

double realized_loss(const CostVector &cost, Action action, State state);

double expected_loss(const CostVector &cost, Belief belief, Action action);

std::array<double, kNumActions> expected_losses(const CostVector &cost,
                                                Belief belief);

Action optimal_action(const CostVector &cost, Belief belief);

double total_benchmark_loss(const BenchmarkCost &benchmark,
                            std::span<const Action> actions,
                            std::span<const State> states);

}  // namespace revpref
