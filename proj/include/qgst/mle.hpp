// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/gateset.hpp"
#include "qgst/optim.hpp"
#include "qgst/simulator.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgst {

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat parameter vector: 16 reals per estimated gate (entries of the
/// lower-triangular factor T with chi = T^dag T), 4 each for rho and E.
/// The null gate is never parameterized. Every parameter value decodes to
/// PSD chi / rho / E by construction; trace preservation and the unit trace
/// of rho are restored exactly inside the decoding map, so the optimizer
/// sees only smooth unconstrained parameters plus the I - E inequality.
int param_count(const GateSet& structure);

Eigen::VectorXd encode_gateset(const GateSet& gs);
GateSet decode_gateset(const GateSet& structure, const Eigen::VectorXd& x);

/// Single-gate codec used by the QPT baseline.
Eigen::VectorXd encode_gate_params(const Ptm& gate);
Ptm decode_gate_params(const Eigen::VectorXd& t16);

struct Objective {
  enum class Kind { unweighted, weighted };
  Kind kind = Kind::unweighted;
  /// Restrict to records with this middle-gate index.
  std::optional<int> gate_scope;
};

/// Weight 1/sigma^2 with sigma^2 = max(m(1-m), 1/(4n)) / n; exact records
/// (n == 0) fall back to weight 1.
double record_weight(const ExperimentRecord& r, const Objective& obj);

double predict_probability(const GateSet& structure, const Eigen::VectorXd& x,
                           const Circuit& c);

/// Reference evaluation through the process-matrix trace expansion
/// sum chi_Fi chi_Gk chi_Fj Tr{E s s s rho s s s}; O(4^6), used to
/// cross-check the PTM product path.
double predict_probability_chi_trace(const GateSet& gs, const Circuit& c);

double evaluate_objective(const GateSet& gs, const Dataset& d,
                          const Objective& obj);
double evaluate_objective(const GateSet& structure, const Eigen::VectorXd& x,
                          const Dataset& d, const Objective& obj);

/// Exact binomial log-likelihood of the dataset under the gate set;
/// reported alongside fits, never optimized.
double binomial_log_likelihood(const GateSet& gs, const Dataset& d);

struct FitOptions {
  /// NaN selects 1e-12 for unweighted and 1e-6 for weighted objectives.
  double tol_fun = std::numeric_limits<double>::quiet_NaN();
  double tol_con = 1e-6;
  int max_iterations = 2000;
  double fd_step = 1e-6;
};

struct FitReport {
  double start_objective = 0.0;
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> objective_trace;
  double tp_residual = 0.0;        // max first-row deviation over gates
  double rho_trace_residual = 0.0;
  double effect_min_eigenvalue = 0.0;  // of I - E, >= -tol_con at success
  double choi_min_eigenvalue = 0.0;    // single-gate fits only
  double wall_ms = 0.0;
};

struct FitResult {
  GateSet estimate;
  FitReport report;
};

/// Constrained weighted least squares from a physical starting point.
/// CP holds by construction, TP and Tr{rho} = 1 through the decoding map,
/// I - E >= 0 through an escalating hinge penalty (residual <= tol_con).
FitResult fit(const Dataset& d, const GateSet& start, const Objective& obj,
              const FitOptions& opts = {});

struct PtmObjectiveEval {
  double value = 0.0;
  std::vector<double> cj_min_eigenvalues;  // per gate, Choi spectrum floor
};

/// PTM-form objective value plus the per-gate Choi positivity margins.
PtmObjectiveEval ptm_objective_eval(const GateSet& gs, const Dataset& d,
                                    const Objective& obj);

}  // namespace qgst
