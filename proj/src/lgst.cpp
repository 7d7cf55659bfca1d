// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/lgst.hpp"

#include "qgst/optim.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace qgst {

GramData assemble_gram(const Dataset& d) {
  validate_complete(d);
  std::map<std::tuple<int, int, int>, double> means;
  for (const auto& r : d.records) means[{r.i, r.j, r.k}] = r.mean;

  const int nf = d.n_fiducials;
  GramData gd;
  gd.gtilde.assign(d.n_gates, Mat4::Zero());
  for (int k = 0; k < d.n_gates; ++k)
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nf; ++j) gd.gtilde[k](i, j) = means.at({i, j, k});
  // g is the k = 0 slice itself, so g == gtilde[0] holds exactly.
  gd.g = gd.gtilde[0];
  for (int i = 0; i < nf; ++i) {
    gd.rho_tilde[i] = means.at({i, -1, -1});
    gd.e_tilde[i] = gd.rho_tilde[i];
  }
  return gd;
}

GramDiagnostics gram_diagnostics(const Mat4& g, double threshold) {
  GramDiagnostics gd;
  gd.threshold = threshold;
  const Eigen::EigenSolver<Mat4> es(g);
  for (int i = 0; i < 4; ++i) gd.eigenvalues[i] = es.eigenvalues()[i];
  gd.min_abs_eigenvalue = es.eigenvalues().cwiseAbs().minCoeff();
  gd.invertible = gd.min_abs_eigenvalue >= threshold;
  return gd;
}

GateSet linear_inversion(const GramData& gd, const FiducialSet& fiducials,
                         const std::vector<std::string>& labels,
                         double gram_threshold) {
  const GramDiagnostics diag = gram_diagnostics(gd.g, gram_threshold);
  if (!diag.invertible) {
    std::ostringstream msg;
    msg << "Gram matrix fails inversion threshold: min |eigenvalue| = "
        << diag.min_abs_eigenvalue << " < " << gram_threshold
        << "; the fiducials are too close to linearly dependent";
    throw GramError(msg.str());
  }

  const Eigen::PartialPivLU<Mat4> lu(gd.g);
  GateSet gs;
  gs.rho = HSVector{lu.solve(gd.rho_tilde), HSRole::state};
  gs.effect = HSVector{gd.e_tilde, HSRole::effect};
  gs.gates.resize(gd.gtilde.size());
  gs.gates[0] = Ptm{};  // g^-1 g, the identity by construction
  for (std::size_t k = 1; k < gd.gtilde.size(); ++k) {
    gs.gates[k].m = lu.solve(gd.gtilde[k]);
  }
  gs.fiducials = fiducials;
  if (!labels.empty()) {
    gs.labels = labels;
  } else {
    for (std::size_t k = 0; k < gs.gates.size(); ++k)
      gs.labels.push_back("G" + std::to_string(k));
  }
  return gs;
}

namespace {

Mat4 pseudo_gate(const GateSet& gs) { return gs.rho.c * gs.effect.c.transpose(); }

// Start for the gauge search: columns are the target fiducials applied to
// the target state, B0_ij = <<i| S_j |tau>>.
Mat4 target_gauge_matrix(const GateSet& target) {
  Mat4 b;
  for (int j = 0; j < target.fiducials.size(); ++j) {
    b.col(j) = fiducial_ptm(target, j).m * target.rho.c;
  }
  return b;
}

}  // namespace

GaugeOptResult gauge_optimize(const GateSet& raw, const GateSet& target) {
  if (raw.num_gates() != target.num_gates())
    throw std::invalid_argument("raw and target gate sets differ in shape");

  const int n_gates = raw.num_gates();
  std::vector<Mat4> raw_terms, target_terms;
  for (int k = 1; k < n_gates; ++k) {
    raw_terms.push_back(raw.gates[k].m);
    target_terms.push_back(target.gates[k].m);
  }
  raw_terms.push_back(pseudo_gate(raw));
  target_terms.push_back(pseudo_gate(target));
  const int n_terms = static_cast<int>(raw_terms.size());

  // The discrepancy is evaluated on the final estimate B G B^-1 against the
  // target; for orthogonal B this coincides with comparing the raw gates to
  // B^-1 T B, and it keeps the minimum at the truth frame when the gate
  // errors commute with their gates.
  LsqProblem problem;
  problem.n_residuals = 16 * n_terms;
  problem.residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const Mat4 b = Eigen::Map<const Mat4>(x.data());
    const Eigen::FullPivLU<Mat4> lu(b);
    if (!lu.isInvertible()) {
      r.setConstant(1e6);
      return;
    }
    const Mat4 binv = lu.inverse();
    int at = 0;
    for (int t = 0; t < n_terms; ++t) {
      const Mat4 diff = b * raw_terms[t] * binv - target_terms[t];
      for (int c = 0; c < 4; ++c)
        for (int rr = 0; rr < 4; ++rr) r[at++] = diff(rr, c);
    }
  };

  const Mat4 b0 = target_gauge_matrix(target);
  Eigen::VectorXd x0(16);
  Eigen::Map<Mat4>(x0.data()) = b0;

  LsqOptions opts;
  opts.tol_fun = 1e-14;
  opts.tol_grad = 1e-13;
  opts.max_iterations = 500;
  const LsqResult sol = levenberg_marquardt(problem, x0, opts);

  GaugeOptResult res;
  res.b_star.b = Eigen::Map<const Mat4>(sol.x.data());
  res.initial_objective = sol.cost_trace.front();
  res.final_objective = sol.cost;
  res.objective_trace = sol.cost_trace;
  res.iterations = sol.iterations;
  res.converged = sol.converged;

  // The objective is invariant under scalar rescalings of B, which trade
  // normalization between rho and E. Pick the representative that restores
  // the unit trace of rho when that is well defined.
  const double rho0 = (res.b_star.b * raw.rho.c)(0);
  if (std::abs(rho0) > 1e-3) {
    res.b_star.b *= kInvSqrt2 / rho0;
  }

  // Final estimate: gates B* G B*^-1, state B* rho, effect E B*^-1.
  const Mat4 b = res.b_star.b;
  const Mat4 binv = b.inverse();
  res.estimate = raw;
  res.estimate.rho.c = b * raw.rho.c;
  res.estimate.effect.c = binv.transpose() * raw.effect.c;
  res.estimate.gates[0] = Ptm{};
  for (int k = 1; k < n_gates; ++k) {
    res.estimate.gates[k].m = b * raw.gates[k].m * binv;
  }
  return res;
}

namespace {

HSVector repair_state(const HSVector& v) {
  const Mat2c m = v.to_matrix();
  Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (m + m.adjoint()));
  Mat2c fixed = Mat2c::Zero();
  for (int i = 0; i < 2; ++i) {
    fixed += std::max(es.eigenvalues()[i], 0.0) *
             es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  const double tr = fixed.trace().real();
  if (tr <= 1e-12) {
    fixed = 0.5 * Mat2c::Identity();
  } else {
    fixed /= tr;
  }
  return HSVector::from_state(fixed);
}

HSVector repair_effect(const HSVector& v) {
  const Mat2c m = v.to_matrix();
  Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (m + m.adjoint()));
  Mat2c fixed = Mat2c::Zero();
  for (int i = 0; i < 2; ++i) {
    const double lam = std::min(std::max(es.eigenvalues()[i], 0.0), 1.0);
    fixed += lam * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return HSVector::from_effect(fixed);
}

}  // namespace

GateSet project_physical(const GateSet& gs) {
  constexpr double kTol = 1e-6;
  GateSet out = gs;
  // Residual normalization drift between rho and E is pure gauge; move it
  // onto E before clipping so that exact-fit inputs stay exact fits.
  const double tr = out.rho.c[0] / kInvSqrt2;
  if (tr > 1e-6) {
    out.rho.c /= tr;
    out.effect.c *= tr;
  }
  for (int k = 1; k < gs.num_gates(); ++k) {
    Ptm r = gs.gates[k];
    // Clip the chi spectrum, restore TP through the completeness condition,
    // repeat until the diagnosis passes.
    for (int pass = 0; pass < 8; ++pass) {
      const auto diag = is_cptp(r, kTol);
      if (diag.cp_ok && diag.tp_ok) break;
      r = chi_to_ptm(tp_normalize_chi(clip_psd(ptm_to_chi(r))));
    }
    out.gates[k] = r;
  }
  if (!out.rho.is_valid(kTol)) out.rho = repair_state(out.rho);
  if (!out.effect.is_valid(kTol)) out.effect = repair_effect(out.effect);
  return out;
}

LgstResult run_lgst(const Dataset& d, const GateSet& target,
                    double gram_threshold) {
  LgstResult res;
  const GramData gd = assemble_gram(d);
  res.gram = gram_diagnostics(gd.g, gram_threshold);
  res.raw = linear_inversion(gd, target.fiducials, target.labels, gram_threshold);
  res.gauge = gauge_optimize(res.raw, target);
  res.physical = project_physical(res.gauge.estimate);
  return res;
}

}  // namespace qgst
