// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/optim.hpp"

#include <algorithm>
#include <cmath>

namespace qgst {

Eigen::MatrixXd numerical_jacobian(const LsqProblem& problem,
                                   const Eigen::VectorXd& x, double fd_step) {
  const int n = static_cast<int>(x.size());
  const int m = problem.n_residuals;
  Eigen::MatrixXd jac(m, n);
  Eigen::VectorXd xp = x, rp(m), rm(m);
  for (int j = 0; j < n; ++j) {
    const double h = fd_step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    problem.residuals(xp, rp);
    xp[j] = x[j] - h;
    problem.residuals(xp, rm);
    xp[j] = x[j];
    jac.col(j) = (rp - rm) / (2.0 * h);
  }
  return jac;
}

LsqResult levenberg_marquardt(const LsqProblem& problem, Eigen::VectorXd x0,
                              const LsqOptions& opts) {
  const int n = static_cast<int>(x0.size());
  LsqResult res;
  res.x = x0;

  Eigen::VectorXd r(problem.n_residuals);
  problem.residuals(res.x, r);
  res.cost = r.squaredNorm();
  res.cost_trace.push_back(res.cost);

  if (res.cost <= opts.tol_fun) {
    res.converged = true;
    res.stop_reason = "cost at or below tol_fun at start";
    return res;
  }

  double lambda = opts.lambda0;
  double nu = 2.0;
  Eigen::VectorXd r_try(problem.n_residuals);
  int stalled = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    const Eigen::MatrixXd jac = numerical_jacobian(problem, res.x, opts.fd_step);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;

    if (g.cwiseAbs().maxCoeff() <= opts.tol_grad) {
      res.converged = true;
      res.stop_reason = "gradient below tol_grad";
      return res;
    }

    // Marquardt scaling keeps the damping meaningful across badly scaled
    // parameter blocks; the floor is relative so that exactly flat
    // directions (gauge freedoms) stay well damped.
    const double diag_floor =
        std::max(1e-6 * jtj.diagonal().maxCoeff(), 1e-300);
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(diag_floor);

    bool accepted = false;
    while (lambda < 1e15) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * diag;
      const Eigen::VectorXd step = a.ldlt().solve(g);
      const Eigen::VectorXd x_try = res.x - step;
      problem.residuals(x_try, r_try);
      const double cost_try = r_try.squaredNorm();
      if (cost_try < res.cost) {
        const double decrease = res.cost - cost_try;
        const double predicted = step.dot(lambda * diag.asDiagonal() * step + g);
        // gain-ratio damping update (Nielsen)
        const double rho = predicted > 0.0 ? decrease / predicted : 1.0;
        const double shrink = 1.0 - std::pow(2.0 * rho - 1.0, 3.0);
        lambda = std::max(lambda * std::max(1.0 / 3.0, shrink), 1e-14);
        nu = 2.0;
        res.x = x_try;
        r = r_try;
        res.cost = cost_try;
        res.cost_trace.push_back(res.cost);
        accepted = true;
        stalled = (decrease <= opts.tol_fun * std::max(1.0, res.cost)) ? stalled + 1 : 0;
        if (stalled >= 3) {
          res.converged = true;
          res.stop_reason = "cost decrease below tol_fun";
          return res;
        }
        if (step.norm() <= opts.tol_step * (res.x.norm() + opts.tol_step)) {
          res.converged = true;
          res.stop_reason = "step below tol_step";
          return res;
        }
        break;
      }
      lambda *= nu;
      nu *= 2.0;
    }
    if (!accepted) {
      res.converged = true;
      res.stop_reason = "no downhill step within damping range";
      return res;
    }
    (void)n;
  }
  res.converged = false;
  res.stop_reason = "max iterations reached";
  return res;
}

}  // namespace qgst
