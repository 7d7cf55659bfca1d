// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/gateset.hpp"

#include "qgst/channels.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace qgst {

void FiducialSet::validate(int n_gates) const {
  if (seqs.empty()) throw std::invalid_argument("fiducial set is empty");
  if (!seqs.front().empty())
    throw std::invalid_argument("first fiducial must be the empty sequence");
  for (const auto& seq : seqs) {
    for (int g : seq) {
      if (g < 0 || g >= n_gates)
        throw std::out_of_range("fiducial refers to a gate outside the set");
    }
  }
}

void GateSet::validate() const {
  if (gates.empty()) throw std::invalid_argument("gate list is empty");
  if ((gates[0].m - Mat4::Identity()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("gate 0 must be the exact identity");
  fiducials.validate(num_gates());
}

namespace {

HSVector ground_state() {
  Mat2c rho = Mat2c::Zero();
  rho(0, 0) = 1.0;
  return HSVector::from_state(rho);
}

HSVector excited_effect() {
  Mat2c e = Mat2c::Zero();
  e(1, 1) = 1.0;
  return HSVector::from_effect(e);
}

}  // namespace

GateSet ideal_gateset() {
  GateSet gs;
  gs.rho = ground_state();
  gs.effect = excited_effect();
  const Eigen::Vector3d x{1, 0, 0}, y{0, 1, 0};
  gs.gates = {Ptm{}, make_channel(ChannelSpec::rotation(x, M_PI / 2)),
              make_channel(ChannelSpec::rotation(y, M_PI / 2)),
              make_channel(ChannelSpec::rotation(x, M_PI))};
  gs.labels = {"null", "X90", "Y90", "X180"};
  gs.fiducials.seqs = {{}, {1}, {2}, {3}};
  return gs;
}

GateSet ideal_gateset_minimal() {
  GateSet gs;
  gs.rho = ground_state();
  gs.effect = excited_effect();
  const Eigen::Vector3d x{1, 0, 0}, y{0, 1, 0};
  gs.gates = {Ptm{}, make_channel(ChannelSpec::rotation(x, M_PI / 2)),
              make_channel(ChannelSpec::rotation(y, M_PI / 2))};
  gs.labels = {"null", "X90", "Y90"};
  gs.fiducials.seqs = {{}, {1}, {2}, {1, 1}};
  return gs;
}

Ptm fiducial_ptm(const GateSet& gs, int f) {
  if (f < 0 || f >= gs.fiducials.size())
    throw std::out_of_range("fiducial index out of range");
  Ptm r;
  for (int g : gs.fiducials.seqs[f]) {
    if (g < 0 || g >= gs.num_gates())
      throw std::out_of_range("fiducial refers to a gate outside the set");
    r.m = gs.gates[g].m * r.m;
  }
  return r;
}

double circuit_probability(const GateSet& gs, const Circuit& c) {
  Vec4 v = gs.rho.c;
  if (c.j >= 0) v = fiducial_ptm(gs, c.j).m * v;
  if (c.k >= 0) {
    if (c.k >= gs.num_gates()) throw std::out_of_range("gate index out of range");
    v = gs.gates[c.k].m * v;
  }
  v = fiducial_ptm(gs, c.i).m * v;
  return gs.effect.c.dot(v);
}

bool GaugeMatrix::invertible(double tol) const {
  return std::abs(b.determinant()) > tol;
}

GateSet gauge_transform(const GateSet& gs, const GaugeMatrix& b) {
  if (!b.invertible()) throw std::invalid_argument("gauge matrix is singular");
  const Eigen::PartialPivLU<Mat4> lu(b.b);
  GateSet out = gs;
  out.rho.c = lu.solve(gs.rho.c);
  out.effect.c = b.b.transpose() * gs.effect.c;
  for (int k = 1; k < gs.num_gates(); ++k) {
    out.gates[k].m = lu.solve(gs.gates[k].m) * b.b;
  }
  out.gates[0] = Ptm{};  // B^-1 I B, exactly
  return out;
}

double avg_fidelity(const Ptm& a, const Ptm& b) {
  const Eigen::FullPivLU<Mat4> lu(a.m);
  if (!lu.isInvertible())
    throw std::domain_error("avg_fidelity: reference PTM is singular");
  const double tr = lu.solve(b.m).trace();
  return (tr + 2.0) / 6.0;
}

double spectral_distance(const Ptm& a, const Ptm& b) {
  Eigen::JacobiSVD<Mat4> svd(a.m - b.m);
  return svd.singularValues()(0);
}

}  // namespace qgst
