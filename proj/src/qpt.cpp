// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/qpt.hpp"

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace qgst {

QstDesign QstDesign::pauli_components() {
  QstDesign d;
  d.a = Mat4::Identity();
  d.fixes_trace_component = true;
  return d;
}

QstDesign QstDesign::from_effects(const std::vector<Vec4>& effects) {
  if (effects.size() != 4)
    throw std::invalid_argument("state tomography needs four effects");
  QstDesign d;
  for (int i = 0; i < 4; ++i) d.a.row(i) = effects[i].transpose();
  return d;
}

HSVector qst_linear_inversion(const Vec4& measurements, const QstDesign& design) {
  Vec4 m = measurements;
  if (design.fixes_trace_component) {
    m[0] = kInvSqrt2;  // the trace component is not measurable
  }
  const Eigen::FullPivLU<Mat4> lu(design.a);
  if (!lu.isInvertible())
    throw std::invalid_argument("state tomography design is singular");
  return HSVector{lu.solve(m), HSRole::state};
}

QptDesign QptDesign::from_target(const GateSet& target) {
  QptDesign d;
  const int nf = target.fiducials.size();
  for (int j = 0; j < nf; ++j) {
    const Ptm f = fiducial_ptm(target, j);
    d.state_vecs.push_back(f.m * target.rho.c);
    d.effect_vecs.push_back(f.m.transpose() * target.effect.c);
  }
  d.s.resize(nf * nf, 16);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          d.s(4 * i + j, 4 * k + l) = d.effect_vecs[i][k] * d.state_vecs[j][l];
    }
  }
  return d;
}

Eigen::VectorXd qpt_ols(const Eigen::MatrixXd& s, const Eigen::VectorXd& m) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(s);
  if (qr.rank() < s.cols())
    throw std::invalid_argument("process tomography design is rank deficient");
  return qr.solve(m);
}

Ptm qpt_linear_inversion(const Dataset& d, int gate, const QptDesign& design) {
  std::map<std::tuple<int, int>, double> means;
  for (const auto& r : d.records) {
    if (r.k == gate && r.j >= 0) means[{r.i, r.j}] = r.mean;
  }
  const int nf = d.n_fiducials;
  if (nf != 4)
    throw std::invalid_argument("the square QPT design needs four fiducials");
  Eigen::VectorXd m(nf * nf);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      const auto it = means.find({i, j});
      if (it == means.end())
        throw DataError("dataset lacks the per-gate slice required by QPT");
      m[4 * i + j] = it->second;
    }
  }
  const Eigen::VectorXd r = qpt_ols(design.s, m);
  Ptm out;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) out.m(k, l) = r[4 * k + l];
  return out;
}

namespace {

// Single gates are fitted in the linear PTM parameterization: the first row
// is pinned to (1,0,0,0), leaving 12 free entries, and positivity enters as
// a penalty on the Choi spectrum floor. The data term is quadratic and
// -min_eig(Choi) is convex in the entries, so the composite problem is
// convex and any start converges to the same estimate.
Ptm gate_from_rows(const Eigen::VectorXd& x) {
  Ptm g;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g.m(r, c) = x[4 * (r - 1) + c];
  g.m.row(0) << 1, 0, 0, 0;
  return g;
}

Eigen::VectorXd rows_from_gate(const Ptm& g) {
  Eigen::VectorXd x(12);
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c) x[4 * (r - 1) + c] = g.m(r, c);
  return x;
}

}  // namespace

QptFitResult qpt_mle(const Dataset& d, int gate, const QptDesign& design,
                     const Ptm& start, const Objective& obj,
                     const FitOptions& opts) {
  const auto t_begin = std::chrono::steady_clock::now();

  struct Slice {
    int i, j;
    double mean, weight;
  };
  std::vector<Slice> slices;
  for (const auto& r : d.records) {
    if (r.k == gate && r.j >= 0) {
      slices.push_back(Slice{r.i, r.j, r.mean, record_weight(r, obj)});
    }
  }
  if (slices.empty())
    throw std::invalid_argument("no records in scope for the QPT fit");

  double tol_fun = opts.tol_fun;
  if (std::isnan(tol_fun)) {
    tol_fun = (obj.kind == Objective::Kind::weighted) ? 1e-6 : 1e-12;
  }

  double hinge_weight = 1e4;
  Eigen::VectorXd x = rows_from_gate(start);
  LsqResult sol;
  double choi_floor = 0.0;
  for (int round = 0; round < 6; ++round) {
    LsqProblem problem;
    problem.n_residuals = static_cast<int>(slices.size()) + 1;
    problem.residuals = [&](const Eigen::VectorXd& xv, Eigen::VectorXd& r) {
      const Ptm g = gate_from_rows(xv);
      for (std::size_t idx = 0; idx < slices.size(); ++idx) {
        const auto& sl = slices[idx];
        const double ph =
            design.effect_vecs[sl.i].dot(g.m * design.state_vecs[sl.j]);
        r[idx] = std::sqrt(sl.weight) * (sl.mean - ph);
      }
      const double violation =
          std::max(0.0, -min_eigenvalue(ptm_to_choi(g).m));
      r[slices.size()] = hinge_weight * violation * violation;
    };

    LsqOptions lm;
    lm.tol_fun = tol_fun;
    lm.max_iterations = opts.max_iterations;
    lm.fd_step = opts.fd_step;
    sol = levenberg_marquardt(problem, x, lm);
    x = sol.x;

    choi_floor = min_eigenvalue(ptm_to_choi(gate_from_rows(x)).m);
    if (choi_floor >= -opts.tol_con) break;
    hinge_weight *= 10.0;
  }

  QptFitResult out;
  out.estimate = gate_from_rows(x);
  double data_objective = 0.0;
  for (const auto& sl : slices) {
    const double ph =
        design.effect_vecs[sl.i].dot(out.estimate.m * design.state_vecs[sl.j]);
    data_objective += sl.weight * (sl.mean - ph) * (sl.mean - ph);
  }
  out.report.final_objective = data_objective;
  out.report.start_objective = sol.cost_trace.front();
  out.report.iterations = sol.iterations;
  out.report.converged = sol.converged && choi_floor >= -opts.tol_con;
  out.report.stop_reason = sol.stop_reason;
  out.report.objective_trace = sol.cost_trace;
  out.report.tp_residual = 0.0;  // the first row is pinned
  out.report.choi_min_eigenvalue = choi_floor;
  out.report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_begin)
          .count();
  return out;
}

}  // namespace qgst
