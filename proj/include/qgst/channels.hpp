// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/pauli.hpp"

namespace qgst {

enum class ChannelKind {
  depolarizing,      // PTM diag(1, 1-lambda, 1-lambda, 1-lambda)
  dephasing,         // PTM diag(1, 1-p, 1-p, 1)
  amplitude_damping,
  rotation,          // unitary exp(-i theta n.sigma / 2)
  null_channel,      // exact identity
};

struct ChannelSpec {
  ChannelKind kind = ChannelKind::null_channel;
  double lambda = 0.0;                    // depolarizing
  double p = 0.0;                         // dephasing / amplitude damping
  double angle = 0.0;                     // rotation
  Eigen::Vector3d axis{0.0, 0.0, 1.0};    // rotation, unit length

  static ChannelSpec depolarizing(double lambda);
  static ChannelSpec dephasing(double p);
  static ChannelSpec amplitude_damping(double p);
  static ChannelSpec rotation(const Eigen::Vector3d& axis, double angle);
  static ChannelSpec null();

  /// Throws std::invalid_argument when a parameter is outside its CP range
  /// (lambda in [0, 4/3], p in [0, 1], |axis| = 1).
  void validate() const;
};

KrausSet kraus_ops(const ChannelSpec& spec);

/// CPTP PTM for the spec; throws on out-of-range parameters.
Ptm make_channel(const ChannelSpec& spec);

/// Gate error 2p of the map (1-3p) rho + p (X rho X + Y rho Y + Z rho Z),
/// i.e. depolarizing with lambda = 4p. Requires 0 <= p <= 1/4.
double depol_gate_error(double p);

/// Exact gate error (2 - 2 cos eps) / 6 of an over-rotation by eps radians.
double overrotation_gate_error(double eps_radians);

const char* channel_kind_name(ChannelKind kind);

}  // namespace qgst
