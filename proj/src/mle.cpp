// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/mle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace qgst {

namespace {

// Lower-triangular factor entries, matching the Cholesky layout
//   [ t1              ]
//   [ t5+it6   t2     ]
//   [ t11+it12 t7+it8  t3 ]
//   [ t15+it16 t13+it14 t9+it10 t4 ]
// (0-based indices below).
Mat4c t_from_params(const Eigen::Ref<const Eigen::VectorXd>& t) {
  Mat4c m = Mat4c::Zero();
  m(0, 0) = t[0];
  m(1, 1) = t[1];
  m(2, 2) = t[2];
  m(3, 3) = t[3];
  m(1, 0) = complexd(t[4], t[5]);
  m(2, 1) = complexd(t[6], t[7]);
  m(3, 2) = complexd(t[8], t[9]);
  m(2, 0) = complexd(t[10], t[11]);
  m(3, 1) = complexd(t[12], t[13]);
  m(3, 0) = complexd(t[14], t[15]);
  return m;
}

void params_from_t(const Mat4c& m, Eigen::Ref<Eigen::VectorXd> t) {
  t[0] = m(0, 0).real();
  t[1] = m(1, 1).real();
  t[2] = m(2, 2).real();
  t[3] = m(3, 3).real();
  t[4] = m(1, 0).real();
  t[5] = m(1, 0).imag();
  t[6] = m(2, 1).real();
  t[7] = m(2, 1).imag();
  t[8] = m(3, 2).real();
  t[9] = m(3, 2).imag();
  t[10] = m(2, 0).real();
  t[11] = m(2, 0).imag();
  t[12] = m(3, 1).real();
  t[13] = m(3, 1).imag();
  t[14] = m(3, 0).real();
  t[15] = m(3, 0).imag();
}

Mat2c t2_from_params(const Eigen::Ref<const Eigen::VectorXd>& t) {
  Mat2c m = Mat2c::Zero();
  m(0, 0) = t[0];
  m(1, 1) = t[1];
  m(1, 0) = complexd(t[2], t[3]);
  return m;
}

// Lower-triangular T with T^dag T = a (a PSD), via the QL decomposition of
// the spectral Gram factor. Row phases are absorbed so the diagonal is
// real and nonnegative.
template <typename MatC>
MatC lower_gram_factor(const MatC& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (a + a.adjoint()));
  MatC w = MatC::Zero();
  for (int i = 0; i < n; ++i) {
    const double lam = std::max(es.eigenvalues()[i], 0.0);
    w.row(i) = std::sqrt(lam) * es.eigenvectors().col(i).adjoint();
  }
  MatC flip = MatC::Zero();
  for (int i = 0; i < n; ++i) flip(i, n - 1 - i) = 1.0;

  Eigen::HouseholderQR<MatC> qr(w * flip);
  const MatC r = qr.matrixQR().template triangularView<Eigen::Upper>();
  MatC t = flip * r * flip;
  for (int i = 0; i < n; ++i) {
    const complexd d = t(i, i);
    if (std::abs(d) > 0.0) t.row(i) *= std::conj(d) / std::abs(d);
  }
  return t;
}

Ptm gate_from_t(const Mat4c& t) {
  ChiMatrix chi;
  chi.m = t.adjoint() * t;
  return chi_to_ptm(tp_normalize_chi(chi));
}

Mat2c matrix_from_t2(const Mat2c& t) { return t.adjoint() * t; }

double min_eig_2x2(const Mat2c& h) {
  Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (h + h.adjoint()));
  return es.eigenvalues().minCoeff();
}

struct ScopedRecords {
  std::vector<Circuit> circuits;
  std::vector<double> means;
  std::vector<double> weights;
};

ScopedRecords scoped_records(const Dataset& d, const Objective& obj) {
  ScopedRecords s;
  for (const auto& r : d.records) {
    if (obj.gate_scope && r.k != *obj.gate_scope) continue;
    s.circuits.push_back(r.circuit());
    s.means.push_back(r.mean);
    s.weights.push_back(record_weight(r, obj));
  }
  if (s.circuits.empty())
    throw std::invalid_argument("no records in scope for the objective");
  return s;
}

}  // namespace

int param_count(const GateSet& structure) {
  return 16 * (structure.num_gates() - 1) + 8;
}

Eigen::VectorXd encode_gateset(const GateSet& gs) {
  gs.validate();
  Eigen::VectorXd x(param_count(gs));
  for (int k = 1; k < gs.num_gates(); ++k) {
    const ChiMatrix chi = clip_psd(ptm_to_chi(gs.gates[k]));
    params_from_t(lower_gram_factor<Mat4c>(chi.m),
                  x.segment(16 * (k - 1), 16));
  }
  const int base = 16 * (gs.num_gates() - 1);
  auto encode_2x2 = [&](const Mat2c& m, int at) {
    Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (m + m.adjoint()));
    Mat2c clipped = Mat2c::Zero();
    for (int i = 0; i < 2; ++i) {
      clipped += std::max(es.eigenvalues()[i], 0.0) *
                 es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    const Mat2c t = lower_gram_factor<Mat2c>(clipped);
    x[at] = t(0, 0).real();
    x[at + 1] = t(1, 1).real();
    x[at + 2] = t(1, 0).real();
    x[at + 3] = t(1, 0).imag();
  };
  encode_2x2(gs.rho.to_matrix(), base);
  encode_2x2(gs.effect.to_matrix(), base + 4);
  return x;
}

GateSet decode_gateset(const GateSet& structure, const Eigen::VectorXd& x) {
  if (x.size() != param_count(structure))
    throw std::invalid_argument("parameter vector has the wrong length");
  GateSet gs = structure;
  gs.gates[0] = Ptm{};
  for (int k = 1; k < gs.num_gates(); ++k) {
    gs.gates[k] = gate_from_t(t_from_params(x.segment(16 * (k - 1), 16)));
  }
  const int base = 16 * (gs.num_gates() - 1);
  Mat2c rho = matrix_from_t2(t2_from_params(x.segment(base, 4)));
  const double tr = rho.trace().real();
  if (tr > 1e-15) {
    rho /= tr;  // unit trace holds exactly for every parameter value
  } else {
    rho = 0.5 * Mat2c::Identity();
  }
  gs.rho = HSVector::from_state(rho);
  gs.effect = HSVector::from_effect(
      matrix_from_t2(t2_from_params(x.segment(base + 4, 4))));
  return gs;
}

Eigen::VectorXd encode_gate_params(const Ptm& gate) {
  Eigen::VectorXd t(16);
  params_from_t(lower_gram_factor<Mat4c>(clip_psd(ptm_to_chi(gate)).m), t);
  return t;
}

Ptm decode_gate_params(const Eigen::VectorXd& t16) {
  if (t16.size() != 16)
    throw std::invalid_argument("gate parameter vector must have 16 entries");
  return gate_from_t(t_from_params(t16));
}

double record_weight(const ExperimentRecord& r, const Objective& obj) {
  if (obj.kind == Objective::Kind::unweighted || r.shots == 0) return 1.0;
  const double n = static_cast<double>(r.shots);
  const double var = std::max(r.mean * (1.0 - r.mean), 0.25 / n) / n;
  return 1.0 / var;
}

double predict_probability(const GateSet& structure, const Eigen::VectorXd& x,
                           const Circuit& c) {
  return circuit_probability(decode_gateset(structure, x), c);
}

double predict_probability_chi_trace(const GateSet& gs, const Circuit& c) {
  const auto& s = pauli_ops();
  const Mat2c e2 = gs.effect.to_matrix();
  const Mat2c rho2 = gs.rho.to_matrix();
  const Mat4c chi_fi = ptm_to_chi(fiducial_ptm(gs, c.i)).m;

  complexd p(0.0, 0.0);
  if (c.k >= 0) {
    const Mat4c chi_g = ptm_to_chi(gs.gates[c.k]).m;
    const Mat4c chi_fj = ptm_to_chi(fiducial_ptm(gs, c.j)).m;
    for (int t = 0; t < 4; ++t)
      for (int u = 0; u < 4; ++u)
        for (int r = 0; r < 4; ++r)
          for (int ss = 0; ss < 4; ++ss)
            for (int m = 0; m < 4; ++m)
              for (int n = 0; n < 4; ++n)
                p += chi_fi(t, u) * chi_g(r, ss) * chi_fj(m, n) *
                     (e2 * s[t] * s[r] * s[m] * rho2 * s[n] * s[ss] * s[u])
                         .trace();
  } else if (c.j >= 0) {
    const Mat4c chi_fj = ptm_to_chi(fiducial_ptm(gs, c.j)).m;
    for (int t = 0; t < 4; ++t)
      for (int u = 0; u < 4; ++u)
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n)
            p += chi_fi(t, u) * chi_fj(m, n) *
                 (e2 * s[t] * s[m] * rho2 * s[n] * s[u]).trace();
  } else {
    for (int t = 0; t < 4; ++t)
      for (int u = 0; u < 4; ++u)
        p += chi_fi(t, u) * (e2 * s[t] * rho2 * s[u]).trace();
  }
  return p.real();
}

double evaluate_objective(const GateSet& gs, const Dataset& d,
                          const Objective& obj) {
  const ScopedRecords recs = scoped_records(d, obj);
  double total = 0.0;
  for (std::size_t idx = 0; idx < recs.circuits.size(); ++idx) {
    const double ph = circuit_probability(gs, recs.circuits[idx]);
    const double diff = recs.means[idx] - ph;
    total += recs.weights[idx] * diff * diff;
  }
  return total;
}

double evaluate_objective(const GateSet& structure, const Eigen::VectorXd& x,
                          const Dataset& d, const Objective& obj) {
  return evaluate_objective(decode_gateset(structure, x), d, obj);
}

double binomial_log_likelihood(const GateSet& gs, const Dataset& d) {
  double ll = 0.0;
  for (const auto& r : d.records) {
    if (r.shots == 0) continue;
    const double ph =
        std::clamp(circuit_probability(gs, r.circuit()), 1e-15, 1.0 - 1e-15);
    const double n = static_cast<double>(r.shots);
    ll += n * (r.mean * std::log(ph) + (1.0 - r.mean) * std::log(1.0 - ph));
  }
  return ll;
}

FitResult fit(const Dataset& d, const GateSet& start, const Objective& obj,
              const FitOptions& opts) {
  const auto t_begin = std::chrono::steady_clock::now();
  const ScopedRecords recs = scoped_records(d, obj);
  const int n_records = static_cast<int>(recs.circuits.size());

  double tol_fun = opts.tol_fun;
  if (std::isnan(tol_fun)) {
    tol_fun = (obj.kind == Objective::Kind::weighted) ? 1e-6 : 1e-12;
  }

  Eigen::VectorXd x = encode_gateset(start);
  const double start_objective = evaluate_objective(start, x, d, obj);

  double hinge_weight = 1e4;
  LsqResult sol;
  double effect_floor = 0.0;
  for (int round = 0; round < 5; ++round) {
    LsqProblem problem;
    problem.n_residuals = n_records + 1;
    problem.residuals = [&](const Eigen::VectorXd& xv, Eigen::VectorXd& r) {
      const GateSet g = decode_gateset(start, xv);
      for (int idx = 0; idx < n_records; ++idx) {
        r[idx] = std::sqrt(recs.weights[idx]) *
                 (recs.means[idx] - circuit_probability(g, recs.circuits[idx]));
      }
      // squared hinge: smooth where E touches the I - E boundary
      const double floor =
          min_eig_2x2(Mat2c::Identity() - g.effect.to_matrix());
      const double violation = std::max(0.0, -floor);
      r[n_records] = hinge_weight * violation * violation;
    };

    LsqOptions lm;
    lm.tol_fun = tol_fun;
    lm.max_iterations = opts.max_iterations;
    lm.fd_step = opts.fd_step;
    sol = levenberg_marquardt(problem, x, lm);
    x = sol.x;

    const GateSet g = decode_gateset(start, x);
    effect_floor = min_eig_2x2(Mat2c::Identity() - g.effect.to_matrix());
    if (effect_floor >= -opts.tol_con) break;
    hinge_weight *= 10.0;
  }

  FitResult out;
  out.estimate = decode_gateset(start, x);
  out.report.start_objective = start_objective;
  out.report.final_objective = evaluate_objective(out.estimate, d, obj);
  out.report.iterations = sol.iterations;
  out.report.converged = sol.converged && effect_floor >= -opts.tol_con;
  out.report.stop_reason = sol.stop_reason;
  out.report.objective_trace = sol.cost_trace;
  double tp = 0.0;
  for (const auto& g : out.estimate.gates)
    tp = std::max(tp, is_cptp(g, 1e-15).tp_row_residual);
  out.report.tp_residual = tp;
  out.report.rho_trace_residual =
      std::abs(out.estimate.rho.to_matrix().trace().real() - 1.0);
  out.report.effect_min_eigenvalue = effect_floor;
  out.report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_begin)
          .count();
  if (!sol.converged) {
    // best iterate is kept; callers inspect report.converged
    out.report.stop_reason += " (best iterate returned)";
  }
  return out;
}

PtmObjectiveEval ptm_objective_eval(const GateSet& gs, const Dataset& d,
                                    const Objective& obj) {
  PtmObjectiveEval out;
  out.value = evaluate_objective(gs, d, obj);
  for (const auto& g : gs.gates) {
    out.cj_min_eigenvalues.push_back(min_eigenvalue(ptm_to_choi(g).m));
  }
  return out;
}

}  // namespace qgst
