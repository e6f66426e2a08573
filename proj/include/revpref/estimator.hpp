//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "revpref/core.hpp"

namespace revpref {

// One observed decision together with the belief it was made under.
struct Observation {
  Belief belief;
  Action action;
};

struct FitOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  double lower_bound = 1e-6;
  double upper_bound = 1e4;
  CostVector initial_cost { 1.0, 1.0, 1.0 };
  // Noise scale of the logit model. The cost scale is not identified, so
  // estimation keeps this at 1; other values exist for simulation studies.
  double beta = 1.0;

  void validate() const;
};

enum class BoundFlag {
  kInterior,
  kAtLower,
  kAtUpper,
};

std::string_view to_string(BoundFlag flag) noexcept;

struct FitResult {
  CostVector cost;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
  // Per component, in (c_fp, c_fn, c_defer) order.
  std::array<BoundFlag, 3> boundary_flags {};
  // Projected-gradient inf-norm of the negative log-likelihood.
  double gradient_norm = 0.0;
  // Only one distinct action was observed, so no interior maximum exists.
  bool degenerate = false;

  bool any_at_bound() const noexcept;
};

enum class RatioName {
  kFnFp,
  kDeferFp,
};

std::string_view to_string(RatioName name) noexcept;

struct RatioInterval {
  RatioName ratio_name = RatioName::kFnFp;
  double point = 0.0;
  double lower_95 = 0.0;
  double upper_95 = 0.0;
  int n_resamples = 0;
  std::uint64_t seed = 0;
  // Resamples whose refit put c_fp on a bound; included in the percentiles.
  int n_boundary = 0;
};

std::array<double, kNumActions> choice_probabilities(const CostVector &cost,
                                                     Belief belief,
                                                     double beta);

double log_likelihood(const CostVector &cost,
                      std::span<const Observation> dataset, double beta);

std::array<double, 3> log_likelihood_gradient(
    const CostVector &cost, std::span<const Observation> dataset, double beta);

// Case weights let bootstrap resamples be expressed as multiplicities. The
// weights span must be empty or match the dataset.
double weighted_log_likelihood(const CostVector &cost,
                               std::span<const Observation> dataset,
                               std::span<const double> weights, double beta,
                               std::array<double, 3> *gradient = nullptr);

FitResult fit_mle(std::span<const Observation> dataset,
                  const FitOptions &options = {});

FitResult fit_mle_weighted(std::span<const Observation> dataset,
                           std::span<const double> weights,
                           const FitOptions &options = {});

struct BootstrapOptions {
  int n_resamples = 1000;
  std::uint64_t seed = 0;
  // 0 selects the hardware concurrency. Results do not depend on it.
  int threads = 0;
};

std::pair<RatioInterval, RatioInterval> bootstrap_ratios(
    std::span<const Observation> dataset, const FitOptions &options,
    const BootstrapOptions &bootstrap);

}  // namespace revpref
