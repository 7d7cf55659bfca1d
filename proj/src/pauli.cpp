// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/pauli.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace qgst {

namespace {

using Mat16c = Eigen::Matrix<complexd, 16, 16>;
using Vec16c = Eigen::Matrix<complexd, 16, 1>;

// Coefficients of the linear map chi -> R:
//   R_ij = (1/2) sum_kl chi_kl Tr{s_i s_k s_j s_l},
// flattened with (i, j) -> 4 i + j.
const Mat16c& chi_ptm_map() {
  static const Mat16c map = [] {
    Mat16c c;
    const auto& s = pauli_ops();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            c(4 * i + j, 4 * k + l) = 0.5 * (s[i] * s[k] * s[j] * s[l]).trace();
    return c;
  }();
  return map;
}

const Eigen::PartialPivLU<Mat16c>& chi_ptm_map_lu() {
  static const Eigen::PartialPivLU<Mat16c> lu(chi_ptm_map());
  return lu;
}

}  // namespace

const std::array<Mat2c, 4>& pauli_ops() {
  static const std::array<Mat2c, 4> ops = [] {
    std::array<Mat2c, 4> s;
    const complexd iu(0.0, 1.0);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -iu, iu, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return ops;
}

const std::array<Mat2c, 4>& pauli_basis() {
  static const std::array<Mat2c, 4> basis = [] {
    std::array<Mat2c, 4> p = pauli_ops();
    for (auto& m : p) m *= kInvSqrt2;
    return p;
  }();
  return basis;
}

HSVector HSVector::from_state(const Mat2c& rho) {
  HSVector v;
  v.role = HSRole::state;
  for (int k = 0; k < 4; ++k) v.c[k] = (pauli_basis()[k] * rho).trace().real();
  return v;
}

HSVector HSVector::from_effect(const Mat2c& e) {
  HSVector v = from_state(e);
  v.role = HSRole::effect;
  return v;
}

Mat2c HSVector::to_matrix() const {
  Mat2c m = Mat2c::Zero();
  for (int k = 0; k < 4; ++k) m += c[k] * pauli_basis()[k];
  return m;
}

bool HSVector::is_valid(double tol) const {
  const Mat2c m = to_matrix();
  Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (m + m.adjoint()));
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (role == HSRole::state) {
    return std::abs(c[0] - kInvSqrt2) <= tol && lo >= -tol;
  }
  return lo >= -tol && hi <= 1.0 + tol;  // E and I - E both PSD
}

ChiMatrix kraus_to_chi(const KrausSet& k) {
  const auto& s = pauli_ops();
  ChiMatrix chi;
  for (const Mat2c& op : k.ops) {
    Eigen::Matrix<complexd, 4, 1> a;
    for (int j = 0; j < 4; ++j) a[j] = 0.5 * (s[j] * op).trace();
    chi.m += a * a.adjoint();  // chi_jk = sum_i a_ij conj(a_ik)
  }
  return chi;
}

Ptm chi_to_ptm(const ChiMatrix& chi) {
  if (hermiticity_residual(chi.m) > 1e-9) {
    throw std::invalid_argument("chi_to_ptm: process matrix must be Hermitian");
  }
  Vec16c v;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) v[4 * k + l] = chi.m(k, l);
  const Vec16c y = chi_ptm_map() * v;
  Ptm r;
  double imag_residue = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const complexd e = y[4 * i + j];
      imag_residue = std::max(imag_residue, std::abs(e.imag()));
      r.m(i, j) = e.real();
    }
  }
  if (imag_residue >= 1e-12) {
    throw std::invalid_argument("chi_to_ptm: imaginary residue above 1e-12");
  }
  return r;
}

ChiMatrix ptm_to_chi(const Ptm& r) {
  Vec16c y;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) y[4 * i + j] = r.m(i, j);
  const Vec16c v = chi_ptm_map_lu().solve(y);
  ChiMatrix chi;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) chi.m(k, l) = v[4 * k + l];
  return chi;
}

ChoiMatrix ptm_to_choi(const Ptm& r) {
  const auto& s = pauli_ops();
  ChoiMatrix choi;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Mat2c left = s[j].transpose();
      const Mat2c& right = s[i];
      // kron(s_j^T, s_i), scaled by R_ij / 4
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          choi.m.block<2, 2>(2 * a, 2 * b) +=
              (0.25 * r.m(i, j)) * left(a, b) * right;
    }
  }
  return choi;
}

Ptm choi_to_ptm(const ChoiMatrix& choi) {
  const auto& s = pauli_ops();
  Ptm r;
  // The basis matrices s_j^T (x) s_i are orthogonal with norm 2, so the
  // expansion coefficients come straight from inner products.
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Mat4c basis = Mat4c::Zero();
      const Mat2c left = s[j].transpose();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          basis.block<2, 2>(2 * a, 2 * b) = left(a, b) * s[i];
      const complexd coef = (basis.adjoint() * choi.m).trace();
      if (std::abs(coef.imag()) > 1e-9)
        throw std::invalid_argument("choi_to_ptm: imaginary residue too large");
      r.m(i, j) = coef.real();
    }
  }
  return r;
}

Ptm kraus_to_ptm(const KrausSet& k) { return chi_to_ptm(kraus_to_chi(k)); }

CptpDiagnosis is_cptp(const Ptm& r, double tol) {
  CptpDiagnosis d;
  d.min_choi_eigenvalue = min_eigenvalue(ptm_to_choi(r).m);
  d.cp_ok = d.min_choi_eigenvalue >= -tol;
  d.tp_row_residual = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double want = (j == 0) ? 1.0 : 0.0;
    d.tp_row_residual = std::max(d.tp_row_residual, std::abs(r.m(0, j) - want));
  }
  d.tp_ok = d.tp_row_residual <= tol;
  return d;
}

bool is_unital(const Ptm& r, double tol) {
  for (int i = 0; i < 4; ++i) {
    const double want = (i == 0) ? 1.0 : 0.0;
    if (std::abs(r.m(i, 0) - want) > tol) return false;
  }
  return true;
}

HSVector apply_channel(const Ptm& r, const HSVector& s) {
  HSVector out;
  out.role = s.role;
  out.c = r.m * s.c;
  return out;
}

Vec4 apply_to_effect(const Ptm& r, const Vec4& e) { return r.m.transpose() * e; }

Ptm compose(const Ptm& after, const Ptm& before) {
  return Ptm{after.m * before.m};
}

double expectation(const HSVector& effect, const HSVector& state) {
  return effect.c.dot(state.c);
}

double hermiticity_residual(const Mat4c& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat4c& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(
      0.5 * (hermitian + hermitian.adjoint()));
  return es.eigenvalues().minCoeff();
}

ChiMatrix clip_psd(const ChiMatrix& chi) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (chi.m + chi.m.adjoint()));
  ChiMatrix out;
  for (int i = 0; i < 4; ++i) {
    const double lam = std::max(es.eigenvalues()[i], 0.0);
    out.m += lam * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return out;
}

namespace {

// Expansion of s_l N over the Paulis: s_l N = sum_j c_lj s_j.
Mat4c right_multiplication_coeffs(const Mat2c& n) {
  const auto& s = pauli_ops();
  Mat4c c;
  for (int l = 0; l < 4; ++l)
    for (int j = 0; j < 4; ++j) c(l, j) = 0.5 * (s[j] * s[l] * n).trace();
  return c;
}

Mat2c inverse_sqrt_2x2(const Mat2c& m) {
  const double tr = m.trace().real();
  const double det = std::max(m.determinant().real(), 0.0);
  const double s = std::sqrt(det);
  const double denom = std::sqrt(std::max(tr + 2.0 * s, 1e-300));
  const Mat2c root = (m + s * Mat2c::Identity()) / denom;
  return root.inverse();
}

}  // namespace

ChiMatrix tp_normalize_chi(const ChiMatrix& chi) {
  const auto& s = pauli_ops();
  Mat2c m = Mat2c::Zero();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) m += chi.m(j, k) * s[k] * s[j];
  m += 1e-12 * Mat2c::Identity();  // keeps the inverse root finite

  const Mat4c c = right_multiplication_coeffs(inverse_sqrt_2x2(m));
  ChiMatrix out;
  out.m = c.transpose() * chi.m * c.conjugate();
  return out;
}

}  // namespace qgst
