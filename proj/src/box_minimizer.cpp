//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/box_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "revpref/error.hpp"

namespace revpref {
namespace {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  struct CurvaturePairs {
    std::deque<std::pair<VectorXd, VectorXd>> pairs;
    double theta = 1.0;

    bool empty() const { return pairs.empty(); }

    void clear() {
      pairs.clear();
      theta = 1.0;
    }

    void push(VectorXd s, VectorXd y, int capacity) {
      theta = y.squaredNorm() / s.dot(y);
      pairs.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(pairs.size()) > capacity)
        pairs.pop_front();
    }

    // Same matrix as the compact representation theta*I - W M W^T; n is
    // small enough that forming it densely is cheaper than bookkeeping.
    MatrixXd hessian(Eigen::Index n) const {
      MatrixXd b = theta * MatrixXd::Identity(n, n);
      for (const auto &[s, y]: pairs) {
        const VectorXd bs = b * s;
        b += y * y.transpose() / y.dot(s) - bs * bs.transpose() / s.dot(bs);
      }
      return b;
    }
  };

  VectorXd project(VectorXd x, const VectorXd &lower, const VectorXd &upper) {
    return x.cwiseMax(lower).cwiseMin(upper);
  }

  // Minimizes the quadratic model along the projected steepest-descent path
  // x(t) = P(x - t g), returning the first local minimizer.
  VectorXd cauchy_point(const VectorXd &x, const VectorXd &g,
                        const VectorXd &lower, const VectorXd &upper,
                        const MatrixXd &b) {
    const Eigen::Index n = x.size();
    VectorXd d = -g;
    std::vector<double> breaks(n, kInf);
    std::vector<Eigen::Index> order;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g[i] < 0)
        breaks[i] = (x[i] - upper[i]) / g[i];
      else if (g[i] > 0)
        breaks[i] = (x[i] - lower[i]) / g[i];

      if (breaks[i] <= 0)
        d[i] = 0;
      else if (breaks[i] < kInf)
        order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](auto i, auto j) {
      return breaks[i] < breaks[j] || (breaks[i] == breaks[j] && i < j);
    });

    VectorXd z = VectorXd::Zero(n);
    double t_prev = 0;
    for (std::size_t k = 0; k <= order.size(); ++k) {
      const double slope = g.dot(d) + d.dot(b * z);
      const double curvature = d.dot(b * d);
      if (slope >= 0 || curvature <= 0)
        break;

      const double t_next = k < order.size() ? breaks[order[k]] : kInf;
      const double dt = -slope / curvature;
      if (dt < t_next - t_prev) {
        z += dt * d;
        break;
      }

      z += (t_next - t_prev) * d;
      const auto i = order[k];
      z[i] = (d[i] > 0 ? upper[i] : lower[i]) - x[i];
      d[i] = 0;
      t_prev = t_next;
    }
    return project(x + z, lower, upper);
  }

  // Newton step of the quadratic model over variables that are free at the
  // Cauchy point, truncated to stay inside the box.
  VectorXd subspace_minimum(const VectorXd &x, const VectorXd &g,
                            const VectorXd &xc, const VectorXd &lower,
                            const VectorXd &upper, const MatrixXd &b) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (xc[i] > lower[i] && xc[i] < upper[i])
        free.push_back(i);
    }
    if (free.empty())
      return xc;

    const VectorXd r = g + b * (xc - x);
    const auto nf = static_cast<Eigen::Index>(free.size());
    MatrixXd bff(nf, nf);
    VectorXd rf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      rf[a] = r[free[a]];
      for (Eigen::Index c = 0; c < nf; ++c)
        bff(a, c) = b(free[a], free[c]);
    }
    const Eigen::LDLT<MatrixXd> ldlt(bff);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      return xc;
    const VectorXd df = ldlt.solve(-rf);
    if (!df.allFinite())
      return xc;

    double alpha = 1;
    for (Eigen::Index a = 0; a < nf; ++a) {
      const auto i = free[a];
      if (df[a] > 0)
        alpha = std::min(alpha, (upper[i] - xc[i]) / df[a]);
      else if (df[a] < 0)
        alpha = std::min(alpha, (lower[i] - xc[i]) / df[a]);
    }

    VectorXd out = xc;
    for (Eigen::Index a = 0; a < nf; ++a)
      out[free[a]] += alpha * df[a];
    return project(std::move(out), lower, upper);
  }

  struct Trial {
    VectorXd x;
    double value;
    VectorXd gradient;
  };
}  // namespace

double projected_gradient_norm(const VectorXd &x, const VectorXd &grad,
                               const VectorXd &lower, const VectorXd &upper) {
  double norm = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double moved = std::clamp(x[i] - grad[i], lower[i], upper[i]);
    norm = std::max(norm, std::abs(moved - x[i]));
  }
  return norm;
}

BoxMinimizerResult minimize_in_box(const BoxObjective &objective, VectorXd x0,
                                   const VectorXd &lower,
                                   const VectorXd &upper,
                                   const BoxMinimizerOptions &options) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n)
    fail(ErrorKind::kDimension, "bounds do not match the starting point");
  if ((lower.array() > upper.array()).any())
    fail(ErrorKind::kParameter, "lower bound exceeds upper bound");

  BoxMinimizerResult result;
  result.x = project(std::move(x0), lower, upper);
  result.gradient.resize(n);
  result.value = objective(result.x, result.gradient);
  result.evaluations = 1;
  result.projected_gradient_norm =
      projected_gradient_norm(result.x, result.gradient, lower, upper);

  CurvaturePairs memory;
  while (true) {
    if (result.projected_gradient_norm <= options.gradient_tolerance) {
      result.status = BoxMinimizerStatus::kConverged;
      return result;
    }
    if (result.iterations >= options.max_iterations) {
      result.status = BoxMinimizerStatus::kMaxIterations;
      return result;
    }

    const VectorXd &x = result.x;
    const VectorXd &g = result.gradient;
    const MatrixXd b = memory.hessian(n);
    const VectorXd xc = cauchy_point(x, g, lower, upper, b);
    const VectorXd xbar = subspace_minimum(x, g, xc, lower, upper, b);

    VectorXd direction = xbar - x;
    double slope0 = g.dot(direction);
    if (!(slope0 < 0)) {
      direction = xc - x;
      slope0 = g.dot(direction);
    }
    if (!(slope0 < 0)) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      result.status = BoxMinimizerStatus::kStalled;
      return result;
    }

    // Backtracking with quadratic interpolation. Besides the Armijo test we
    // accept steps satisfying the approximate Wolfe conditions, which stay
    // usable once function differences drop below rounding noise.
    double step = 1;
    if (memory.empty())
      step = std::min(1.0, 1.0 / direction.norm());
    const double noise = 1e-10 * std::max(1.0, std::abs(result.value));

    std::optional<Trial> accepted;
    for (int ls = 0; ls < options.max_line_search_steps; ++ls) {
      Trial trial { project(x + step * direction, lower, upper), 0,
                    VectorXd(n) };
      trial.value = objective(trial.x, trial.gradient);
      ++result.evaluations;

      if (std::isfinite(trial.value)) {
        const double slope = trial.gradient.dot(direction);
        const bool armijo =
            trial.value <= result.value + 1e-4 * step * slope0;
        const bool approx_wolfe = trial.value <= result.value + noise
                                  && slope >= 0.9 * slope0
                                  && slope <= -0.8 * slope0;
        if (armijo || approx_wolfe) {
          accepted = std::move(trial);
          break;
        }
        const double denom =
            2 * (trial.value - result.value - slope0 * step);
        double next = denom > 0 ? -slope0 * step * step / denom : 0.5 * step;
        step = std::clamp(next, 0.1 * step, 0.5 * step);
      } else {
        step *= 0.1;
      }
    }

    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      result.status = BoxMinimizerStatus::kStalled;
      return result;
    }

    VectorXd s = accepted->x - x;
    VectorXd y = accepted->gradient - g;
    const bool moved =
        s.lpNorm<Eigen::Infinity>()
        > kEps * std::max(1.0, x.lpNorm<Eigen::Infinity>());

    result.x = std::move(accepted->x);
    result.value = accepted->value;
    result.gradient = std::move(accepted->gradient);
    result.projected_gradient_norm =
        projected_gradient_norm(result.x, result.gradient, lower, upper);
    ++result.iterations;

    const double sy = s.dot(y);
    if (sy > kEps * y.squaredNorm())
      memory.push(std::move(s), std::move(y), options.memory);

    if (!moved && result.projected_gradient_norm > options.gradient_tolerance) {
      result.status = BoxMinimizerStatus::kStalled;
      return result;
    }
  }
}

}  // namespace revpref
