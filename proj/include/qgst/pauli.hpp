// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace qgst {

using complexd = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4d;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Unnormalized single-qubit Pauli operators {I, X, Y, Z}.
const std::array<Mat2c, 4>& pauli_ops();

/// Normalized basis P_k = sigma_k / sqrt(2), so Tr{P_i P_j} = delta_ij.
const std::array<Mat2c, 4>& pauli_basis();

enum class HSRole { state, effect };

/// Hilbert-Schmidt vector: the four real components Tr{P_k A} of a state or
/// measurement effect in the normalized Pauli basis. For a unit-trace state
/// the first component is 1/sqrt(2).
struct HSVector {
  Vec4 c = Vec4::Zero();
  HSRole role = HSRole::state;

  static HSVector from_state(const Mat2c& rho);
  static HSVector from_effect(const Mat2c& e);

  /// Reconstructs the 2x2 matrix sum_k c[k] P_k.
  Mat2c to_matrix() const;

  /// States: unit trace and PSD reconstruction. Effects: E and I-E PSD.
  bool is_valid(double tol = 1e-9) const;
};

/// Channel as a 4x4 real matrix in the normalized Pauli basis. Composition of
/// channels is the matrix product; trace preservation is first row (1,0,0,0).
struct Ptm {
  Mat4 m = Mat4::Identity();
};

/// Process matrix against *unnormalized* Paulis: L(rho) = sum chi_jk s_j rho s_k.
struct ChiMatrix {
  Mat4c m = Mat4c::Zero();
};

struct ChoiMatrix {
  Mat4c m = Mat4c::Zero();
};

struct KrausSet {
  std::vector<Mat2c> ops;
};

struct CptpDiagnosis {
  bool cp_ok = false;
  bool tp_ok = false;
  double min_choi_eigenvalue = 0.0;
  double tp_row_residual = 0.0;
};

ChiMatrix kraus_to_chi(const KrausSet& k);

/// Throws std::invalid_argument for non-Hermitian input; the imaginary
/// residue of the result must be below 1e-12 and is discarded.
Ptm chi_to_ptm(const ChiMatrix& chi);

/// Inverse of chi_to_ptm, via the precomputed 16x16 linear map.
ChiMatrix ptm_to_chi(const Ptm& r);

ChoiMatrix ptm_to_choi(const Ptm& r);

/// Inverse of ptm_to_choi. The imaginary residue must stay below 1e-9.
Ptm choi_to_ptm(const ChoiMatrix& choi);

Ptm kraus_to_ptm(const KrausSet& k);

/// CP from the minimum Choi eigenvalue, TP from the first-row residual.
/// Degenerate inputs are diagnosed, never rejected.
CptpDiagnosis is_cptp(const Ptm& r, double tol = 1e-9);

/// First column (1,0,0,0)^T within tol.
bool is_unital(const Ptm& r, double tol = 1e-9);

HSVector apply_channel(const Ptm& r, const HSVector& s);

/// Channel acting on a measurement effect (Heisenberg picture): R^T e.
Vec4 apply_to_effect(const Ptm& r, const Vec4& e);

/// compose(a, b): b is applied first.
Ptm compose(const Ptm& after, const Ptm& before);

/// <<E|rho>> = Tr{E rho}; plain dot product of the component vectors.
double expectation(const HSVector& effect, const HSVector& state);

double hermiticity_residual(const Mat4c& m);
double min_eigenvalue(const Mat4c& hermitian);

/// Clips negative eigenvalues of the Hermitian part to zero.
ChiMatrix clip_psd(const ChiMatrix& chi);

/// Rescales a PSD process matrix so the completeness condition holds
/// exactly: the underlying Kraus operators are right-multiplied by
/// M^{-1/2} with M = sum chi_jk s_k s_j. Positivity is preserved.
ChiMatrix tp_normalize_chi(const ChiMatrix& chi);

}  // namespace qgst
