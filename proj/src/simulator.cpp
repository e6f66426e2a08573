//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <variant>

#include <fmt/format.h>

#include "revpref/error.hpp"
#include "revpref/parallel.hpp"
#include "revpref/random.hpp"
#include "revpref/stats.hpp"

namespace revpref {
namespace {
  // Uniform on the open interval (0, 1).
  double open_uniform01(Rng &rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  }

  double draw_belief(const BeliefDistribution &dist, std::size_t i,
                     Rng &rng) {
    return std::visit(
        [&](const auto &d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UniformBeliefs>) {
            return uniform01(rng);
          } else if constexpr (std::is_same_v<T, BetaBeliefs>) {
            std::gamma_distribution<double> ga(d.a, 1.0), gb(d.b, 1.0);
            const double x = ga(rng);
            const double y = gb(rng);
            return x / (x + y);
          } else {
            return d.values[i % d.values.size()];
          }
        },
        dist);
  }

  Action sample_logit(const CostVector &cost, Belief belief, double beta,
                      Rng &rng) {
    const auto probs = choice_probabilities(cost, belief, beta);
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (std::size_t a = 0; a + 1 < kNumActions; ++a) {
      cumulative += probs[a];
      if (u < cumulative)
        return kAllActions[a];
    }
    return kAllActions.back();
  }

  Action sample_gumbel(const CostVector &cost, Belief belief, double beta,
                       Rng &rng) {
    const auto losses = expected_losses(cost, belief);
    std::size_t best = 0;
    double best_utility = -INFINITY;
    for (std::size_t a = 0; a < kNumActions; ++a) {
      const double shock = -std::log(-std::log(open_uniform01(rng)));
      const double utility = -losses[a] / beta + shock;
      if (utility > best_utility) {
        best_utility = utility;
        best = a;
      }
    }
    return kAllActions[best];
  }

  State draw_state(Belief belief, Rng &rng) {
    return uniform01(rng) < belief.p() ? State::kPresent : State::kAbsent;
  }

  double clip01(double p) { return std::clamp(p, 0.0, 1.0); }

  std::string case_id(int i) { return fmt::format("case-{:06d}", i); }

  // Ratio-space interpolation toward a target, anchored at c_fp = 1.
  CostVector steer(const CostVector &from, const CostVector &to,
                   double fraction) {
    auto lerp_log = [fraction](double a, double b) {
      return std::exp((1.0 - fraction) * std::log(a) + fraction * std::log(b));
    };
    return { 1.0, lerp_log(from.fn_fp(), to.fn_fp()),
             lerp_log(from.defer_fp(), to.defer_fp()) };
  }
}  // namespace

void AgentSpec::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorKind::kParameter, fmt::format("beta must be positive, got {}",
                                            beta));
  if (n_cases < 1)
    fail(ErrorKind::kParameter, "n_cases must be at least 1");
  std::visit(
      [](const auto &d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BetaBeliefs>) {
          if (!(d.a > 0.0) || !(d.b > 0.0) || !std::isfinite(d.a)
              || !std::isfinite(d.b))
            fail(ErrorKind::kParameter,
                 fmt::format("beta distribution needs a, b > 0, got ({}, {})",
                             d.a, d.b));
        } else if constexpr (std::is_same_v<T, GridBeliefs>) {
          if (d.values.empty())
            fail(ErrorKind::kParameter, "belief grid is empty");
          for (double v: d.values) {
            if (!(v >= 0.0 && v <= 1.0))
              fail(ErrorKind::kParameter,
                   fmt::format("belief grid value {} outside [0, 1]", v));
          }
        }
      },
      belief_distribution);
}

std::vector<CaseRecord> simulate_dataset(const AgentSpec &spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, { 0 }));

  std::vector<CaseRecord> records;
  records.reserve(static_cast<std::size_t>(spec.n_cases));
  for (int i = 0; i < spec.n_cases; ++i) {
    const Belief belief(clip01(
        draw_belief(spec.belief_distribution, static_cast<std::size_t>(i),
                    rng)));
    CaseRecord rec;
    rec.case_id = case_id(i);
    rec.domain = spec.domain;
    rec.p_elicited = belief;
    rec.p_true = belief;
    rec.theta = draw_state(belief, rng);
    rec.actions[DecisionRegime::baseline()] =
        spec.explicit_gumbel ? sample_gumbel(spec.cost, belief, spec.beta, rng)
                             : sample_logit(spec.cost, belief, spec.beta, rng);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<Observation> observations(std::span<const CaseRecord> records,
                                      const DecisionRegime &regime,
                                      BeliefSource source) {
  std::vector<Observation> out;
  out.reserve(records.size());
  for (const auto &rec: records) {
    const auto it = rec.actions.find(regime);
    if (it == rec.actions.end())
      fail(ErrorKind::kIncompleteRecord,
           fmt::format("case '{}' has no action under regime '{}'",
                       rec.case_id, regime.key()));
    Belief belief = rec.p_elicited;
    if (source == BeliefSource::kTrue) {
      if (!rec.p_true)
        fail(ErrorKind::kIncompleteRecord,
             fmt::format("case '{}' has no p_true", rec.case_id));
      belief = *rec.p_true;
    }
    out.push_back({ belief, it->second });
  }
  return out;
}

std::vector<Belief> perturb_beliefs(std::span<const Belief> beliefs,
                                    double sd, std::uint64_t seed) {
  if (!(sd >= 0.0) || !std::isfinite(sd))
    fail(ErrorKind::kParameter,
         fmt::format("noise sd must be nonnegative, got {}", sd));
  std::vector<Belief> out(beliefs.begin(), beliefs.end());
  if (sd == 0.0)
    return out;

  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  for (auto &b: out)
    b = Belief(clip01(b.p() + noise(rng)));
  return out;
}

void SensitivitySpec::validate() const {
  if (noise_sds.empty())
    fail(ErrorKind::kParameter, "noise grid is empty");
  if (!std::is_sorted(noise_sds.begin(), noise_sds.end()))
    fail(ErrorKind::kParameter, "noise grid must be sorted ascending");
  if (std::find(noise_sds.begin(), noise_sds.end(), 0.0) == noise_sds.end())
    fail(ErrorKind::kParameter, "noise grid must include 0 as a control");
  if (noise_sds.front() < 0.0)
    fail(ErrorKind::kParameter, "noise sds must be nonnegative");
  if (n_repetitions < 1)
    fail(ErrorKind::kParameter, "n_repetitions must be at least 1");
  if (band_resamples < 1)
    fail(ErrorKind::kParameter, "band_resamples must be at least 1");
}

SensitivityTable noise_sensitivity(std::span<const Observation> dataset,
                                   const SensitivitySpec &spec,
                                   const FitOptions &options) {
  spec.validate();
  SensitivityTable table;
  table.base_fit = fit_mle(dataset, options);
  table.base_at_bound = table.base_fit.boundary_flags[0] != BoundFlag::kInterior;
  const double base_fn = table.base_fit.cost.fn_fp();
  const double base_defer = table.base_fit.cost.defer_fp();

  std::vector<Belief> beliefs;
  beliefs.reserve(dataset.size());
  for (const auto &obs: dataset)
    beliefs.push_back(obs.belief);

  const std::size_t n_sd = spec.noise_sds.size();
  const auto reps = static_cast<std::size_t>(spec.n_repetitions);
  std::vector<double> fn_change(n_sd * reps), defer_change(n_sd * reps);
  std::vector<char> at_bound(n_sd * reps);

  auto relative_change = [](double value, double base) {
    return std::abs(value - base) / base * 100.0;
  };

  parallel_for(n_sd * reps, spec.threads, [&](std::size_t k) {
    const std::size_t s = k / reps;
    const std::size_t r = k % reps;
    const auto noisy = perturb_beliefs(beliefs, spec.noise_sds[s],
                                       derive_seed(spec.seed, { s, r }));
    std::vector<Observation> perturbed(dataset.begin(), dataset.end());
    for (std::size_t i = 0; i < perturbed.size(); ++i)
      perturbed[i].belief = noisy[i];

    const FitResult fit = fit_mle(perturbed, options);
    fn_change[k] = relative_change(fit.cost.fn_fp(), base_fn);
    defer_change[k] = relative_change(fit.cost.defer_fp(), base_defer);
    at_bound[k] = fit.boundary_flags[0] != BoundFlag::kInterior;
  });

  // Percentile-bootstrap band for the median over repetitions.
  auto band = [&](std::span<const double> values, std::uint64_t stream) {
    Rng rng(derive_seed(spec.seed, { stream, 0xba5d }));
    std::vector<double> medians(static_cast<std::size_t>(spec.band_resamples));
    std::vector<double> draw(values.size());
    for (auto &m: medians) {
      for (auto &d: draw)
        d = values[static_cast<std::size_t>(uniform01(rng)
                                            * static_cast<double>(
                                                values.size()))];
      m = median(draw);
    }
    return std::pair { quantile(medians, 0.025), quantile(medians, 0.975) };
  };

  for (std::size_t s = 0; s < n_sd; ++s) {
    const std::span<const double> fn(fn_change.data() + s * reps, reps);
    const std::span<const double> defer(defer_change.data() + s * reps, reps);

    SensitivityRow row;
    row.sd = spec.noise_sds[s];
    row.n_repetitions = spec.n_repetitions;
    row.fn_fp_median = median(fn);
    std::tie(row.fn_fp_lower, row.fn_fp_upper) = band(fn, 2 * s);
    row.defer_fp_median = median(defer);
    std::tie(row.defer_fp_lower, row.defer_fp_upper) = band(defer, 2 * s + 1);
    row.n_boundary = static_cast<int>(
        std::count(at_bound.begin() + static_cast<std::ptrdiff_t>(s * reps),
                   at_bound.begin() + static_cast<std::ptrdiff_t>((s + 1) * reps),
                   1));
    table.rows.push_back(row);
  }
  return table;
}

Belief average_beliefs(std::span<const Belief> replicates, int k) {
  if (k < 1)
    fail(ErrorKind::kParameter, "k must be at least 1");
  if (replicates.size() < static_cast<std::size_t>(k))
    fail(ErrorKind::kIncompleteRecord,
         fmt::format("{} belief replicates available, {} requested",
                     replicates.size(), k));
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
    sum += replicates[static_cast<std::size_t>(i)].p();
  return Belief(clip01(sum / k));
}

std::vector<CaseRecord> simulate_study(const StudySpec &spec) {
  if (spec.n_cases < 1)
    fail(ErrorKind::kParameter, "n_cases must be at least 1");
  if (spec.n_replicates < 1)
    fail(ErrorKind::kParameter, "n_replicates must be at least 1");
  if (!(spec.beta > 0.0))
    fail(ErrorKind::kParameter, "beta must be positive");

  Rng rng(derive_seed(spec.seed, { 1 }));
  std::normal_distribution<double> elicitation(0.0, spec.elicitation_sd);
  std::normal_distribution<double> report_jitter(0.0, 0.3);

  std::vector<std::pair<DecisionRegime, CostVector>> steered;
  for (const auto &bench: spec.benchmarks)
    steered.emplace_back(
        DecisionRegime::cost_prompt(bench.id),
        steer(spec.baseline_cost, bench.cost, spec.steering_fraction));

  std::vector<CaseRecord> records;
  records.reserve(static_cast<std::size_t>(spec.n_cases));
  for (int i = 0; i < spec.n_cases; ++i) {
    CaseRecord rec;
    rec.case_id = case_id(i);
    rec.domain = spec.domain;
    const Belief truth(uniform01(rng));
    rec.p_true = truth;
    rec.theta = draw_state(truth, rng);

    std::vector<Belief> replicates;
    for (int r = 0; r < spec.n_replicates; ++r)
      replicates.emplace_back(clip01(truth.p() + elicitation(rng)));
    rec.p_elicited = replicates.front();
    rec.belief_replicates = replicates;

    const Belief elicited = rec.p_elicited;
    const auto &cost = spec.baseline_cost;
    rec.actions[DecisionRegime::baseline()] =
        sample_logit(cost, elicited, spec.beta, rng);
    rec.actions[DecisionRegime::elicited_prob()] =
        sample_logit(cost, elicited, spec.beta, rng);
    rec.actions[DecisionRegime::true_prob()] =
        sample_logit(cost, truth, spec.beta, rng);
    for (const auto &[regime, steered_cost]: steered)
      rec.actions[regime] = sample_logit(steered_cost, elicited, spec.beta, rng);

    rec.self_report_global = spec.self_report_global;
    const auto &g = spec.self_report_global;
    rec.self_report_case = CostVector(g.c_fp(),
                                      g.c_fn() * std::exp(report_jitter(rng)),
                                      g.c_defer()
                                          * std::exp(report_jitter(rng)));
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace revpref
