// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/pauli.hpp"

#include <string>
#include <vector>

namespace qgst {

/// Fiducial sequences: each entry lists gate indices in application order
/// (first applied first). The first fiducial must be the empty sequence.
struct FiducialSet {
  std::vector<std::vector<int>> seqs;

  int size() const { return static_cast<int>(seqs.size()); }
  void validate(int n_gates) const;
};

/// The estimated object: initial state, measurement effect, and the gate
/// list. gates[0] is the null gate and must be the exact identity.
struct GateSet {
  HSVector rho;
  HSVector effect;
  std::vector<Ptm> gates;
  std::vector<std::string> labels;
  FiducialSet fiducials;

  int num_gates() const { return static_cast<int>(gates.size()); }
  void validate() const;
};

/// {null, X90, Y90, X180} with the fiducials equal to the gate list and
/// rho = |0><0|, E = |1><1|.
GateSet ideal_gateset();

/// {null, X90, Y90} with the fourth fiducial built as X90 twice.
GateSet ideal_gateset_minimal();

/// One measured circuit <<E| F_i G_k F_j |rho>>. k = -1 drops the middle
/// gate; j = -1 additionally drops the second fiducial.
struct Circuit {
  int i = 0;
  int j = -1;
  int k = -1;
};

/// Product of the member PTMs of fiducial f, in application order.
Ptm fiducial_ptm(const GateSet& gs, int f);

double circuit_probability(const GateSet& gs, const Circuit& c);

struct GaugeMatrix {
  Mat4 b = Mat4::Identity();

  bool invertible(double tol = 1e-12) const;
};

/// |rho> -> B^-1 |rho>, <<E| -> <<E| B, G -> B^-1 G B. Preserves every
/// circuit probability exactly. Throws on singular B.
GateSet gauge_transform(const GateSet& gs, const GaugeMatrix& b);

/// (Tr{R_a^-1 R_b} + d) / (d (d+1)) with d = 2. Throws on singular R_a.
double avg_fidelity(const Ptm& a, const Ptm& b);

/// Largest singular value of R_a - R_b.
double spectral_distance(const Ptm& a, const Ptm& b);

}  // namespace qgst
