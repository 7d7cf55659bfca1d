// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/gateset.hpp"
#include "qgst/mle.hpp"
#include "qgst/simulator.hpp"

#include <vector>

namespace qgst {

/// State-tomography design: the assumed measurement effects, stacked as the
/// rows of A. The Pauli-component design (A = I) cannot measure the trace
/// component, which is fixed to 1/sqrt(2) instead.
struct QstDesign {
  Mat4 a = Mat4::Identity();
  bool fixes_trace_component = false;

  static QstDesign pauli_components();
  static QstDesign from_effects(const std::vector<Vec4>& effects);
};

/// |rho^> = A^-1 |m>. Throws on a singular design. The estimate is not
/// constrained to be physical.
HSVector qst_linear_inversion(const Vec4& measurements, const QstDesign& design);

/// Process-tomography design assumed by the analysis: input states and
/// effects built from the *target* fiducials and SPAM, plus the 16x16
/// design matrix S mapping the vectorized PTM to the probability vector.
struct QptDesign {
  std::vector<Vec4> state_vecs;   // S_j |tau>
  std::vector<Vec4> effect_vecs;  // mu^T through S_i
  Eigen::MatrixXd s;              // row (4 i + j), column (4 k + l)

  static QptDesign from_target(const GateSet& target);
};

/// Ordinary least squares (S^T S)^-1 S^T m on the per-gate slice of the
/// dataset. Throws on a rank-deficient design.
Ptm qpt_linear_inversion(const Dataset& d, int gate, const QptDesign& design);

/// Generalized OLS entry point for overcomplete designs.
Eigen::VectorXd qpt_ols(const Eigen::MatrixXd& s, const Eigen::VectorXd& m);

struct QptFitResult {
  Ptm estimate;
  FitReport report;
};

/// Single-gate constrained fit assuming the design's ideal SPAM; CPTP by
/// construction, started from the target gate.
QptFitResult qpt_mle(const Dataset& d, int gate, const QptDesign& design,
                     const Ptm& start, const Objective& obj,
                     const FitOptions& opts = {});

}  // namespace qgst
