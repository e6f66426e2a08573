//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace revpref {

// Limited-memory BFGS with box constraints (generalized Cauchy point,
// subspace minimization over the free variables, backtracking line search).
// Sized for small problems: the quasi-Newton matrix is formed densely.

struct BoxMinimizerOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;  // on the projected-gradient inf-norm
  int memory = 10;
  int max_line_search_steps = 40;
};

enum class BoxMinimizerStatus {
  kConverged,
  kMaxIterations,
  kStalled,  // no acceptable step; see projected_gradient_norm
};

struct BoxMinimizerResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  BoxMinimizerStatus status = BoxMinimizerStatus::kStalled;
};

// Returns f(x) and writes the gradient into grad.
using BoxObjective =
    std::function<double(const Eigen::VectorXd &x, Eigen::VectorXd &grad)>;

double projected_gradient_norm(const Eigen::VectorXd &x,
                               const Eigen::VectorXd &grad,
                               const Eigen::VectorXd &lower,
                               const Eigen::VectorXd &upper);

BoxMinimizerResult minimize_in_box(const BoxObjective &objective,
                                   Eigen::VectorXd x0,
                                   const Eigen::VectorXd &lower,
                                   const Eigen::VectorXd &upper,
                                   const BoxMinimizerOptions &options = {});

}  // namespace revpref
