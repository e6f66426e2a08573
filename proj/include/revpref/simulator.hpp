//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "revpref/core.hpp"
#include "revpref/estimator.hpp"

namespace revpref {

struct UniformBeliefs { };

struct BetaBeliefs {
  double a = 1.0;
  double b = 1.0;
};

// Case i receives values[i % values.size()].
struct GridBeliefs {
  std::vector<double> values;
};

using BeliefDistribution = std::variant<UniformBeliefs, BetaBeliefs,
                                        GridBeliefs>;

// A rational agent whose choices follow the logit model: expected loss plus
// Gumbel(beta) shocks.
struct AgentSpec {
  CostVector cost { 1.0, 4.0, 0.5 };
  double beta = 1.0;
  BeliefDistribution belief_distribution = UniformBeliefs {};
  int n_cases = 1000;
  std::uint64_t seed = 0;
  // Draw explicit Gumbel shocks instead of sampling the softmax; both give
  // the same action distribution.
  bool explicit_gumbel = false;
  std::string domain = "synthetic";

  void validate() const;
};

// Records carry p_elicited == p_true == the drawn belief, theta drawn from
// that belief, and one action under the baseline regime.
std::vector<CaseRecord> simulate_dataset(const AgentSpec &spec);

std::vector<Observation> observations(std::span<const CaseRecord> records,
                                      const DecisionRegime &regime,
                                      BeliefSource source);

std::vector<Belief> perturb_beliefs(std::span<const Belief> beliefs,
                                    double sd, std::uint64_t seed);

struct SensitivitySpec {
  std::vector<double> noise_sds { 0.0, 0.01, 0.02, 0.05, 0.10, 0.20 };
  int n_repetitions = 20;
  std::uint64_t seed = 0;
  int band_resamples = 1000;
  int threads = 0;

  void validate() const;
};

struct SensitivityRow {
  double sd = 0.0;
  // Median over repetitions of |perturbed - base| / base * 100, with 95%
  // percentile-bootstrap bands for that median.
  double fn_fp_median = 0.0;
  double fn_fp_lower = 0.0;
  double fn_fp_upper = 0.0;
  double defer_fp_median = 0.0;
  double defer_fp_lower = 0.0;
  double defer_fp_upper = 0.0;
  int n_repetitions = 0;
  // Refits with c_fp on a bound.
  int n_boundary = 0;
};

struct SensitivityTable {
  FitResult base_fit;
  // The unperturbed fit has c_fp on a bound; changes are measured against
  // the bounded ratio.
  bool base_at_bound = false;
  std::vector<SensitivityRow> rows;
};

SensitivityTable noise_sensitivity(std::span<const Observation> dataset,
                                   const SensitivitySpec &spec,
                                   const FitOptions &options = {});

// Mean of the first k replicates.
Belief average_beliefs(std::span<const Belief> replicates, int k);

// Multi-regime synthetic study, used for fixtures and end-to-end checks.
// Elicited beliefs are the true posterior plus Gaussian noise; steered
// agents move each log-ratio `steering_fraction` of the way to the
// benchmark.
struct StudySpec {
  CostVector baseline_cost { 1.0, 4.0, 0.5 };
  double beta = 1.0;
  int n_cases = 400;
  std::uint64_t seed = 0;
  double elicitation_sd = 0.05;
  int n_replicates = 5;
  double steering_fraction = 0.8;
  std::vector<BenchmarkCost> benchmarks;
  CostVector self_report_global { 1.0, 10.0, 2.0 };
  std::string domain = "synthetic";
};

std::vector<CaseRecord> simulate_study(const StudySpec &spec);

}  // namespace revpref
