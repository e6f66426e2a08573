//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "revpref/error.hpp"

namespace revpref {
namespace {
  void check_lengths(std::size_t a, std::size_t b, std::string_view what) {
    if (a != b)
      fail(ErrorKind::kDimension,
           fmt::format("{}: lengths {} and {} differ", what, a, b));
  }

  std::vector<Action> rational_decisions(const CostVector &cost,
                                         std::span<const Belief> beliefs) {
    std::vector<Action> out;
    out.reserve(beliefs.size());
    for (const Belief b: beliefs)
      out.push_back(optimal_action(cost, b));
    return out;
  }

  double percent_reduction(const BenchmarkCost &benchmark,
                           std::span<const Action> before,
                           std::span<const Action> after,
                           std::span<const State> states) {
    const double base = total_benchmark_loss(benchmark, before, states);
    const double next = total_benchmark_loss(benchmark, after, states);
    if (base == 0.0)
      fail(ErrorKind::kUndefinedDenominator,
           fmt::format("baseline loss under benchmark '{}' is zero",
                       benchmark.id));
    return 100.0 * (base - next) / base;
  }
}  // namespace

std::string_view to_string(SteeringClass c) noexcept {
  switch (c) {
  case SteeringClass::kWrong:
    return "wrong";
  case SteeringClass::kUnder:
    return "under";
  case SteeringClass::kTarget:
    return "target";
  case SteeringClass::kOver:
    return "over";
  }
  return "?";
}

std::string_view to_string(Intervention i) noexcept {
  return i == Intervention::kCostPrompt ? "cost" : "prob";
}

Belief belief_of(const CaseRecord &record, BeliefSource source) {
  if (source == BeliefSource::kElicited)
    return record.p_elicited;
  if (!record.p_true)
    fail(ErrorKind::kIncompleteRecord,
         fmt::format("case '{}' has no p_true", record.case_id));
  return *record.p_true;
}

double ilfc(std::span<const CaseRecord> cases, const DecisionRegime &regime,
            BeliefSource belief_source, const CostVector &cost) {
  return ilfc(cases, regime, belief_source,
              [&cost](const CaseRecord &) { return cost; });
}

double ilfc(std::span<const CaseRecord> cases, const DecisionRegime &regime,
            BeliefSource belief_source,
            const std::function<CostVector(const CaseRecord &)> &cost_of) {
  if (cases.empty())
    fail(ErrorKind::kEmptyDataset, "consistency score of an empty dataset");

  std::size_t matches = 0;
  for (const auto &record: cases) {
    const auto it = record.actions.find(regime);
    if (it == record.actions.end())
      fail(ErrorKind::kIncompleteRecord,
           fmt::format("case '{}' has no action under regime '{}'",
                       record.case_id, regime.key()));
    const Belief belief = belief_of(record, belief_source);
    if (it->second == optimal_action(cost_of(record), belief))
      ++matches;
  }
  return 100.0 * static_cast<double>(matches)
         / static_cast<double>(cases.size());
}

double counterfactual_reduction(const BenchmarkCost &benchmark,
                                const CostVector &from_cost,
                                std::span<const Belief> from_beliefs,
                                const CostVector &to_cost,
                                std::span<const Belief> to_beliefs,
                                std::span<const State> states) {
  check_lengths(from_beliefs.size(), states.size(), "counterfactual");
  check_lengths(to_beliefs.size(), states.size(), "counterfactual");
  const auto before = rational_decisions(from_cost, from_beliefs);
  const auto after = rational_decisions(to_cost, to_beliefs);
  return percent_reduction(benchmark, before, after, states);
}

double realized_reduction(const BenchmarkCost &benchmark,
                          std::span<const Action> baseline_actions,
                          std::span<const Action> prompted_actions,
                          std::span<const State> states) {
  check_lengths(baseline_actions.size(), states.size(), "realized reduction");
  check_lengths(prompted_actions.size(), states.size(), "realized reduction");
  return percent_reduction(benchmark, baseline_actions, prompted_actions,
                           states);
}

double steering_progress(double baseline_ratio, double steered_ratio,
                         double true_ratio) {
  for (double r: { baseline_ratio, steered_ratio, true_ratio }) {
    if (!(r > 0.0) || !std::isfinite(r))
      fail(ErrorKind::kParameter,
           fmt::format("steering ratios must be positive and finite, got {}",
                       r));
  }
  const double b = std::log2(baseline_ratio / true_ratio);
  if (b == 0.0)
    fail(ErrorKind::kUndefinedProgress,
         "baseline ratio already equals the target ratio");
  const double l = std::log2(steered_ratio / true_ratio);
  return std::copysign(1.0, b) * (b - l) / std::abs(b);
}

SteeringClass classify_steering(double progress) {
  if (!std::isfinite(progress))
    fail(ErrorKind::kParameter, "steering progress must be finite");
  if (progress < 0.0)
    return SteeringClass::kWrong;
  if (progress < 0.8)
    return SteeringClass::kUnder;
  if (progress <= 1.2)
    return SteeringClass::kTarget;
  return SteeringClass::kOver;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size(), "pearson_r");
  if (x.size() < 2)
    fail(ErrorKind::kDimension, "pearson_r needs at least two pairs");

  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    fail(ErrorKind::kDegenerateInput, "pearson_r input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double rmsd(std::span<const Belief> a, std::span<const Belief> b) {
  check_lengths(a.size(), b.size(), "rmsd");
  if (a.empty())
    fail(ErrorKind::kEmptyDataset, "rmsd of empty belief vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i].p() - b[i].p();
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

void SteeringTally::add(double baseline_ratio, double steered_ratio,
                        double true_ratio) {
  try {
    const double progress =
        steering_progress(baseline_ratio, steered_ratio, true_ratio);
    ++counts[static_cast<std::size_t>(classify_steering(progress))];
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kUndefinedProgress)
      throw;
    ++excluded;
  }
}

int SteeringTally::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

}  // namespace revpref
