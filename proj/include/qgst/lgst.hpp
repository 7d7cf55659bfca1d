// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/gateset.hpp"
#include "qgst/simulator.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace qgst {

struct GramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Measured matrices assembled from a dataset. g is taken from the k = 0
/// records, so g == gtilde[0] holds exactly; rho_tilde and e_tilde come from
/// the dedicated single-fiducial records and are componentwise identical.
struct GramData {
  Mat4 g = Mat4::Zero();
  std::vector<Mat4> gtilde;
  Vec4 rho_tilde = Vec4::Zero();
  Vec4 e_tilde = Vec4::Zero();
};

GramData assemble_gram(const Dataset& d);

struct GramDiagnostics {
  std::array<complexd, 4> eigenvalues{};
  double min_abs_eigenvalue = 0.0;
  double threshold = 0.1;
  bool invertible = false;
};

GramDiagnostics gram_diagnostics(const Mat4& g, double threshold = 0.1);

/// Raw linear-inversion estimate: rho = g^-1 rho~, E = E~, G_k = g^-1 G~_k.
/// The null-gate estimate is the identity by construction. labels and
/// fiducials describe the intended experiment design. Throws GramError when
/// g fails the eigenvalue threshold.
GateSet linear_inversion(const GramData& gd, const FiducialSet& fiducials,
                         const std::vector<std::string>& labels = {},
                         double gram_threshold = 0.1);

struct GaugeOptResult {
  GaugeMatrix b_star;
  GateSet estimate;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

/// Finds the gauge B minimizing the summed squared Frobenius distance
/// between the raw gates and B^-1 T_k B over the target gates plus the
/// pseudo-gate |rho><<E|, starting from B0_ij = <<i| S_j |tau>>. The
/// returned estimate is the B*-frame of the raw gate set.
GaugeOptResult gauge_optimize(const GateSet& raw, const GateSet& target);

/// Nearest-physical repair: clip negative chi eigenvalues, restore trace
/// preservation through the completeness condition, repeat to convergence.
/// rho and E are clipped to valid state/effect matrices.
GateSet project_physical(const GateSet& gs);

struct LgstResult {
  GramDiagnostics gram;
  GateSet raw;
  GaugeOptResult gauge;
  GateSet physical;  // project_physical(gauge.estimate)
};

/// Full pipeline: assemble, diagnose, invert, gauge-optimize to the target,
/// project. The physical output is the usual MLE starting point.
LgstResult run_lgst(const Dataset& d, const GateSet& target,
                    double gram_threshold = 0.1);

}  // namespace qgst
