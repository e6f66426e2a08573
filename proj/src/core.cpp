//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/core.hpp"

#include <cmath>

#include <fmt/format.h>

#include "revpref/error.hpp"

namespace revpref {

std::string_view to_string(Action a) noexcept {
  switch (a) {
  case Action::kDiagnosePositive:
    return "yes";
  case Action::kDiagnoseNegative:
    return "no";
  case Action::kDefer:
    return "defer";
  }
  return "?";
}

Belief::Belief(double p): p_(p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0)
    fail(ErrorKind::kRange,
         fmt::format("belief {} is not a probability in [0, 1]", p));
}

CostVector::CostVector(double c_fp, double c_fn, double c_defer)
    : c_fp_(c_fp), c_fn_(c_fn), c_defer_(c_defer) {
  for (double c: { c_fp, c_fn, c_defer }) {
    if (!std::isfinite(c) || c < 0.0)
      fail(ErrorKind::kRange,
           fmt::format("cost ({}, {}, {}) must be finite and nonnegative",
                       c_fp, c_fn, c_defer));
  }
}

double CostVector::fn_fp() const {
  if (c_fp_ <= 0.0)
    fail(ErrorKind::kUndefinedRatio, "fn/fp ratio undefined: c_fp is zero");
  return c_fn_ / c_fp_;
}

double CostVector::defer_fp() const {
  if (c_fp_ <= 0.0)
    fail(ErrorKind::kUndefinedRatio,
         "defer/fp ratio undefined: c_fp is zero");
  return c_defer_ / c_fp_;
}

CostVector CostVector::scaled(double lambda) const {
  return { lambda * c_fp_, lambda * c_fn_, lambda * c_defer_ };
}

std::string_view to_string(BeliefSource source) noexcept {
  return source == BeliefSource::kElicited ? "elicited" : "true";
}

BeliefSource belief_source_from_string(std::string_view text) {
  if (text == "elicited")
    return BeliefSource::kElicited;
  if (text == "true")
    return BeliefSource::kTrue;
  fail(ErrorKind::kParameter,
       fmt::format("belief source must be 'elicited' or 'true', got '{}'",
                   text));
}

std::string DecisionRegime::key() const {
  switch (kind) {
  case Kind::kBaseline:
    return "baseline";
  case Kind::kElicitedProbPrompt:
    return "elicited_p";
  case Kind::kTrueProbPrompt:
    return "true_p";
  case Kind::kCostFunctionPrompt:
    return "cost:" + benchmark_id;
  case Kind::kSelfReportGlobal:
    return "self_report_global";
  case Kind::kSelfReportCase:
    return "self_report_case";
  }
  return {};
}

DecisionRegime DecisionRegime::from_key(std::string_view key) {
  if (key == "baseline")
    return baseline();
  if (key == "elicited_p")
    return elicited_prob();
  if (key == "true_p")
    return true_prob();
  if (key == "self_report_global")
    return { Kind::kSelfReportGlobal, {} };
  if (key == "self_report_case")
    return { Kind::kSelfReportCase, {} };
  if (key.starts_with("cost:") && key.size() > 5)
    return cost_prompt(std::string(key.substr(5)));
  fail(ErrorKind::kParse, fmt::format("unknown regime key '{}'", key));
}

double realized_loss(const CostVector &cost, Action action, State state) {
  switch (action) {
  case Action::kDiagnosePositive:
    return state == State::kAbsent ? cost.c_fp() : 0.0;
  case Action::kDiagnoseNegative:
    return state == State::kPresent ? cost.c_fn() : 0.0;
  case Action::kDefer:
    return cost.c_defer();
  }
  return 0.0;
}

double expected_loss(const CostVector &cost, Belief belief, Action action) {
  switch (action) {
  case Action::kDiagnosePositive:
    return cost.c_fp() * (1.0 - belief.p());
  case Action::kDiagnoseNegative:
    return cost.c_fn() * belief.p();
  case Action::kDefer:
    return cost.c_defer();
  }
  return 0.0;
}

std::array<double, kNumActions> expected_losses(const CostVector &cost,
                                                Belief belief) {
  return {
    expected_loss(cost, belief, Action::kDiagnosePositive),
    expected_loss(cost, belief, Action::kDiagnoseNegative),
    expected_loss(cost, belief, Action::kDefer),
  };
}

Action optimal_action(const CostVector &cost, Belief belief) {
  const auto losses = expected_losses(cost, belief);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumActions; ++i) {
    if (losses[i] < losses[best])
      best = i;
  }
  return kAllActions[best];
}

double total_benchmark_loss(const BenchmarkCost &benchmark,
                            std::span<const Action> actions,
                            std::span<const State> states) {
  if (actions.size() != states.size())
    fail(ErrorKind::kDimension,
         fmt::format("{} actions but {} states", actions.size(),
                     states.size()));
  if (actions.empty())
    fail(ErrorKind::kEmptyDataset, "no decisions to score");

  double total = 0.0;
  for (std::size_t i = 0; i < actions.size(); ++i)
    total += realized_loss(benchmark.cost, actions[i], states[i]);
  return total;
}

}  // namespace revpref
