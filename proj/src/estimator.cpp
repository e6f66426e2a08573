//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "revpref/box_minimizer.hpp"
#include "revpref/error.hpp"
#include "revpref/parallel.hpp"
#include "revpref/random.hpp"
#include "revpref/stats.hpp"

namespace revpref {
namespace {
  void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
      fail(ErrorKind::kParameter,
           fmt::format("noise scale beta must be positive, got {}", beta));
  }

  // d(expected loss of action j)/d(cost component j); every other partial
  // derivative is zero.
  std::array<double, 3> loadings(Belief belief) {
    return { 1.0 - belief.p(), belief.p(), 1.0 };
  }

  bool has_weight(std::span<const double> weights, std::size_t i) {
    return weights.empty() || weights[i] > 0.0;
  }

  BoundFlag bound_flag(double c, double lower, double upper) {
    if (c <= lower * (1.0 + 1e-6))
      return BoundFlag::kAtLower;
    if (c >= upper * (1.0 - 1e-6))
      return BoundFlag::kAtUpper;
    return BoundFlag::kInterior;
  }
}  // namespace

void FitOptions::validate() const {
  check_beta(beta);
  if (max_iterations < 0)
    fail(ErrorKind::kParameter, "max_iterations must be nonnegative");
  if (!(gradient_tolerance >= 0.0))
    fail(ErrorKind::kParameter, "gradient_tolerance must be nonnegative");
  if (!(lower_bound >= 0.0) || !(lower_bound < upper_bound)
      || !std::isfinite(upper_bound))
    fail(ErrorKind::kParameter,
         fmt::format("invalid cost bounds [{}, {}]", lower_bound,
                     upper_bound));
  for (double c: initial_cost.to_array()) {
    if (c < lower_bound || c > upper_bound)
      fail(ErrorKind::kParameter,
           fmt::format("initial cost component {} outside bounds [{}, {}]",
                       c, lower_bound, upper_bound));
  }
}

std::string_view to_string(BoundFlag flag) noexcept {
  switch (flag) {
  case BoundFlag::kInterior:
    return "interior";
  case BoundFlag::kAtLower:
    return "lower";
  case BoundFlag::kAtUpper:
    return "upper";
  }
  return "?";
}

bool FitResult::any_at_bound() const noexcept {
  return std::any_of(boundary_flags.begin(), boundary_flags.end(),
                     [](BoundFlag f) { return f != BoundFlag::kInterior; });
}

std::string_view to_string(RatioName name) noexcept {
  return name == RatioName::kFnFp ? "fn_fp" : "defer_fp";
}

std::array<double, kNumActions> choice_probabilities(const CostVector &cost,
                                                     Belief belief,
                                                     double beta) {
  check_beta(beta);
  const auto losses = expected_losses(cost, belief);
  const double lowest = *std::min_element(losses.begin(), losses.end());

  std::array<double, kNumActions> probs {};
  double total = 0.0;
  for (std::size_t a = 0; a < kNumActions; ++a) {
    probs[a] = std::exp(-(losses[a] - lowest) / beta);
    total += probs[a];
  }
  // Tail probabilities can underflow; keep them representable and positive.
  for (double &p: probs)
    p = std::max(p / total, std::numeric_limits<double>::min());
  return probs;
}

double weighted_log_likelihood(const CostVector &cost,
                               std::span<const Observation> dataset,
                               std::span<const double> weights, double beta,
                               std::array<double, 3> *gradient) {
  check_beta(beta);
  if (dataset.empty())
    fail(ErrorKind::kEmptyDataset, "log-likelihood of an empty dataset");
  if (!weights.empty() && weights.size() != dataset.size())
    fail(ErrorKind::kDimension,
         fmt::format("{} weights for {} observations", weights.size(),
                     dataset.size()));

  double total = 0.0;
  std::array<double, 3> grad {};
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!has_weight(weights, i))
      continue;
    const double w = weights.empty() ? 1.0 : weights[i];
    const auto &obs = dataset[i];

    const auto losses = expected_losses(cost, obs.belief);
    const double lowest = *std::min_element(losses.begin(), losses.end());
    std::array<double, kNumActions> e {};
    double sum = 0.0;
    for (std::size_t a = 0; a < kNumActions; ++a) {
      e[a] = std::exp(-(losses[a] - lowest) / beta);
      sum += e[a];
    }

    const auto chosen = index_of(obs.action);
    total += w * (-(losses[chosen] - lowest) / beta - std::log(sum));

    if (gradient != nullptr) {
      const auto load = loadings(obs.belief);
      for (std::size_t j = 0; j < 3; ++j) {
        const double indicator = j == chosen ? 1.0 : 0.0;
        grad[j] += w * (e[j] / sum - indicator) * load[j] / beta;
      }
    }
  }
  if (gradient != nullptr)
    *gradient = grad;
  return total;
}

double log_likelihood(const CostVector &cost,
                      std::span<const Observation> dataset, double beta) {
  return weighted_log_likelihood(cost, dataset, {}, beta);
}

std::array<double, 3> log_likelihood_gradient(
    const CostVector &cost, std::span<const Observation> dataset,
    double beta) {
  std::array<double, 3> grad {};
  weighted_log_likelihood(cost, dataset, {}, beta, &grad);
  return grad;
}

FitResult fit_mle_weighted(std::span<const Observation> dataset,
                           std::span<const double> weights,
                           const FitOptions &options) {
  options.validate();
  if (dataset.empty())
    fail(ErrorKind::kEmptyDataset, "cannot fit an empty dataset");
  if (!weights.empty() && weights.size() != dataset.size())
    fail(ErrorKind::kDimension,
         fmt::format("{} weights for {} observations", weights.size(),
                     dataset.size()));

  std::array<bool, kNumActions> observed {};
  std::array<bool, 3> loaded {};
  bool any = false;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!weights.empty() && weights[i] < 0.0)
      fail(ErrorKind::kParameter, "negative case weight");
    if (!has_weight(weights, i))
      continue;
    any = true;
    observed[index_of(dataset[i].action)] = true;
    const auto load = loadings(dataset[i].belief);
    for (std::size_t j = 0; j < 3; ++j)
      loaded[j] = loaded[j] || load[j] > 0.0;
  }
  if (!any)
    fail(ErrorKind::kEmptyDataset, "all case weights are zero");
  const auto n_observed = std::count(observed.begin(), observed.end(), true);

  const double lb = options.lower_bound;
  const double ub = options.upper_bound;
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(3, lb);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(3, ub);
  Eigen::VectorXd x0(3);
  const auto init = options.initial_cost.to_array();
  for (int j = 0; j < 3; ++j)
    x0[j] = init[j];

  // The log-likelihood is strictly increasing in the cost of an action that
  // never occurs, and (with a single observed action) strictly decreasing in
  // the cost of that action. Such coordinates sit on their bound at the
  // maximum, where the flattening exp() tails would otherwise stop the
  // optimizer well short of it.
  for (std::size_t j = 0; j < 3; ++j) {
    if (!loaded[j])
      continue;
    if (!observed[j])
      lower[j] = x0[j] = ub;
    else if (n_observed == 1)
      upper[j] = x0[j] = lb;
  }

  const double beta = options.beta;
  auto objective = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) {
    const CostVector cost(x[0], x[1], x[2]);
    std::array<double, 3> g {};
    const double ll =
        weighted_log_likelihood(cost, dataset, weights, beta, &g);
    if (!std::isfinite(ll) || !std::isfinite(g[0]) || !std::isfinite(g[1])
        || !std::isfinite(g[2]))
      fail(ErrorKind::kNumeric,
           fmt::format("non-finite log-likelihood {} at cost ({}, {}, {})",
                       ll, x[0], x[1], x[2]));
    for (int j = 0; j < 3; ++j)
      grad[j] = -g[j];
    return -ll;
  };

  BoxMinimizerOptions minimizer;
  minimizer.max_iterations = options.max_iterations;
  minimizer.gradient_tolerance = options.gradient_tolerance;
  const auto solved = minimize_in_box(objective, x0, lower, upper, minimizer);

  FitResult result;
  result.cost = CostVector(solved.x[0], solved.x[1], solved.x[2]);
  result.log_likelihood = -solved.value;
  result.iterations = solved.iterations;
  result.gradient_norm = projected_gradient_norm(
      solved.x, solved.gradient, Eigen::VectorXd::Constant(3, lb),
      Eigen::VectorXd::Constant(3, ub));
  result.converged = solved.status == BoxMinimizerStatus::kConverged
                     && result.gradient_norm <= options.gradient_tolerance;
  for (int j = 0; j < 3; ++j)
    result.boundary_flags[j] = bound_flag(solved.x[j], lb, ub);
  result.degenerate = n_observed < 2;
  return result;
}

FitResult fit_mle(std::span<const Observation> dataset,
                  const FitOptions &options) {
  return fit_mle_weighted(dataset, {}, options);
}

std::pair<RatioInterval, RatioInterval> bootstrap_ratios(
    std::span<const Observation> dataset, const FitOptions &options,
    const BootstrapOptions &bootstrap) {
  if (bootstrap.n_resamples < 1)
    fail(ErrorKind::kParameter,
         fmt::format("n_resamples must be at least 1, got {}",
                     bootstrap.n_resamples));
  const FitResult point = fit_mle(dataset, options);

  // Resample fits start from the full-sample estimate; the objective is
  // concave, so only the iteration count depends on the start.
  FitOptions resample_options = options;
  resample_options.initial_cost = point.cost;

  const auto n = dataset.size();
  const auto r = static_cast<std::size_t>(bootstrap.n_resamples);
  std::vector<double> fn_fp(r), defer_fp(r);
  std::vector<char> at_bound(r);
  parallel_for(r, bootstrap.threads, [&](std::size_t k) {
    Rng rng(derive_seed(bootstrap.seed, { k }));
    std::vector<double> counts(n, 0.0);
    for (std::size_t draw = 0; draw < n; ++draw)
      counts[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n))]
          += 1.0;

    const FitResult fit = fit_mle_weighted(dataset, counts, resample_options);
    fn_fp[k] = fit.cost.fn_fp();
    defer_fp[k] = fit.cost.defer_fp();
    at_bound[k] = fit.boundary_flags[0] != BoundFlag::kInterior;
  });

  const int n_boundary =
      static_cast<int>(std::count(at_bound.begin(), at_bound.end(), 1));
  auto interval = [&](RatioName name, double estimate,
                      std::vector<double> values) {
    RatioInterval out;
    out.ratio_name = name;
    out.point = estimate;
    out.lower_95 = quantile(values, 0.025);
    out.upper_95 = quantile(std::move(values), 0.975);
    out.n_resamples = bootstrap.n_resamples;
    out.seed = bootstrap.seed;
    out.n_boundary = n_boundary;
    return out;
  };
  return { interval(RatioName::kFnFp, point.cost.fn_fp(), std::move(fn_fp)),
           interval(RatioName::kDeferFp, point.cost.defer_fp(),
                    std::move(defer_fp)) };
}

}  // namespace revpref
