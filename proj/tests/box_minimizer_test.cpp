//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/box_minimizer.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace {
  using namespace revpref;
  using Eigen::VectorXd;

  VectorXd vec(std::initializer_list<double> v) {
    VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const double x: v)
      out[i++] = x;
    return out;
  }

  // f = sum_i w_i (x_i - t_i)^2
  BoxObjective weighted_quadratic(VectorXd w, VectorXd t) {
    return [w, t](const VectorXd &x, VectorXd &g) {
      g = 2.0 * w.cwiseProduct(x - t);
      return w.dot((x - t).cwiseAbs2());
    };
  }

  TEST(ProjectedGradientNormTest, HandValues) {
    const VectorXd lo = vec({ 0, 0, 0 }), hi = vec({ 1, 1, 1 });
    // At the lower bound a positive gradient is blocked; at the upper bound
    // a negative one is.
    EXPECT_DOUBLE_EQ(
        projected_gradient_norm(vec({ 0, 1, 0.5 }), vec({ 3, -2, 0.25 }), lo, hi),
        0.25);
    // Unblocked steps are still cut at the far side of the box.
    EXPECT_DOUBLE_EQ(
        projected_gradient_norm(vec({ 0, 1, 0.5 }), vec({ -3, 2, 0 }), lo, hi),
        1.0);
    const VectorXd wide = vec({ 10, 10, 10 });
    EXPECT_DOUBLE_EQ(projected_gradient_norm(vec({ 0, 10, 5 }),
                                             vec({ -3, 2, 0 }), lo, wide),
                     3.0);
  }

  TEST(BoxMinimizerTest, InteriorQuadratic) {
    const auto f = weighted_quadratic(vec({ 1, 10, 100 }), vec({ 0.3, -2, 5 }));
    const auto r = minimize_in_box(f, vec({ 1, 1, 1 }), vec({ -10, -10, -10 }),
                                   vec({ 10, 10, 10 }));
    EXPECT_EQ(r.status, BoxMinimizerStatus::kConverged);
    EXPECT_NEAR(r.x[0], 0.3, 1e-8);
    EXPECT_NEAR(r.x[1], -2.0, 1e-8);
    EXPECT_NEAR(r.x[2], 5.0, 1e-8);
  }

  TEST(BoxMinimizerTest, ActiveBoundsClipTheMinimum) {
    const auto f = weighted_quadratic(vec({ 1, 1, 1 }), vec({ -3, 0.5, 7 }));
    const auto r = minimize_in_box(f, vec({ 0.2, 0.2, 0.2 }), vec({ 0, 0, 0 }),
                                   vec({ 1, 1, 1 }));
    EXPECT_EQ(r.status, BoxMinimizerStatus::kConverged);
    EXPECT_EQ(r.x[0], 0.0);
    EXPECT_NEAR(r.x[1], 0.5, 1e-8);
    EXPECT_EQ(r.x[2], 1.0);
    EXPECT_LE(r.projected_gradient_norm, 1e-8);
  }

  TEST(BoxMinimizerTest, RosenbrockInsideBox) {
    const BoxObjective rosen = [](const VectorXd &x, VectorXd &g) {
      const double a = 1 - x[0], b = x[1] - x[0] * x[0];
      g.resize(2);
      g[0] = -2 * a - 400 * x[0] * b;
      g[1] = 200 * b;
      return a * a + 100 * b * b;
    };
    const auto r = minimize_in_box(rosen, vec({ -1.2, 1 }), vec({ -2, -2 }),
                                   vec({ 2, 2 }));
    EXPECT_EQ(r.status, BoxMinimizerStatus::kConverged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-6);
    EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  }

  TEST(BoxMinimizerTest, RosenbrockWithBindingBound) {
    // Constrained optimum on x0 = 0.5 is (0.5, 0.25).
    const BoxObjective rosen = [](const VectorXd &x, VectorXd &g) {
      const double a = 1 - x[0], b = x[1] - x[0] * x[0];
      g.resize(2);
      g[0] = -2 * a - 400 * x[0] * b;
      g[1] = 200 * b;
      return a * a + 100 * b * b;
    };
    const auto r = minimize_in_box(rosen, vec({ -1, 0 }), vec({ -2, -2 }),
                                   vec({ 0.5, 2 }));
    EXPECT_EQ(r.status, BoxMinimizerStatus::kConverged);
    EXPECT_EQ(r.x[0], 0.5);
    EXPECT_NEAR(r.x[1], 0.25, 1e-7);
  }

  TEST(BoxMinimizerTest, StartIsProjectedIntoBox) {
    const auto f = weighted_quadratic(vec({ 1, 1 }), vec({ 0.5, 0.5 }));
    const auto r =
        minimize_in_box(f, vec({ 50, -50 }), vec({ 0, 0 }), vec({ 1, 1 }));
    EXPECT_NEAR(r.x[0], 0.5, 1e-8);
    EXPECT_NEAR(r.x[1], 0.5, 1e-8);
  }

  TEST(BoxMinimizerTest, IterationCapIsReported) {
    const BoxObjective rosen = [](const VectorXd &x, VectorXd &g) {
      const double a = 1 - x[0], b = x[1] - x[0] * x[0];
      g.resize(2);
      g[0] = -2 * a - 400 * x[0] * b;
      g[1] = 200 * b;
      return a * a + 100 * b * b;
    };
    BoxMinimizerOptions opts;
    opts.max_iterations = 2;
    const auto r = minimize_in_box(rosen, vec({ -1.2, 1 }), vec({ -2, -2 }),
                                   vec({ 2, 2 }), opts);
    EXPECT_EQ(r.status, BoxMinimizerStatus::kMaxIterations);
    EXPECT_EQ(r.iterations, 2);
  }
}  // namespace
