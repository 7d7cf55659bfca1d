// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace qgst {

/// Dense nonlinear least squares: minimize |r(x)|^2.
struct LsqProblem {
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> residuals;
  int n_residuals = 0;
};

struct LsqOptions {
  double tol_fun = 1e-12;   // stop when the accepted cost decrease is below
                            // tol_fun * max(1, cost)
  double tol_grad = 1e-12;
  double tol_step = 1e-14;
  int max_iterations = 400;
  double fd_step = 1e-6;    // central-difference step scale
  double lambda0 = 1e-3;
};

struct LsqResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_trace;  // accepted costs, non-increasing
  std::string stop_reason;
};

/// Levenberg-Marquardt with a central-difference Jacobian. Deterministic
/// given the starting point; on non-convergence the best iterate is kept.
LsqResult levenberg_marquardt(const LsqProblem& problem, Eigen::VectorXd x0,
                              const LsqOptions& opts = {});

/// The Jacobian the solver uses (central differences, column by column).
Eigen::MatrixXd numerical_jacobian(const LsqProblem& problem,
                                   const Eigen::VectorXd& x, double fd_step);

}  // namespace qgst
