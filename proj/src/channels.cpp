// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace qgst {

ChannelSpec ChannelSpec::depolarizing(double lambda) {
  ChannelSpec s;
  s.kind = ChannelKind::depolarizing;
  s.lambda = lambda;
  return s;
}

ChannelSpec ChannelSpec::dephasing(double p) {
  ChannelSpec s;
  s.kind = ChannelKind::dephasing;
  s.p = p;
  return s;
}

ChannelSpec ChannelSpec::amplitude_damping(double p) {
  ChannelSpec s;
  s.kind = ChannelKind::amplitude_damping;
  s.p = p;
  return s;
}

ChannelSpec ChannelSpec::rotation(const Eigen::Vector3d& axis, double angle) {
  ChannelSpec s;
  s.kind = ChannelKind::rotation;
  const double n = axis.norm();
  if (n <= 0.0) throw std::invalid_argument("rotation axis must be nonzero");
  s.axis = axis / n;
  s.angle = angle;
  return s;
}

ChannelSpec ChannelSpec::null() { return ChannelSpec{}; }

void ChannelSpec::validate() const {
  switch (kind) {
    case ChannelKind::depolarizing:
      if (lambda < 0.0 || lambda > 4.0 / 3.0)
        throw std::invalid_argument("depolarizing lambda outside [0, 4/3]");
      break;
    case ChannelKind::dephasing:
      if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("dephasing p outside [0, 1]");
      break;
    case ChannelKind::amplitude_damping:
      if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("amplitude damping p outside [0, 1]");
      break;
    case ChannelKind::rotation:
      if (std::abs(axis.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("rotation axis must be a unit vector");
      break;
    case ChannelKind::null_channel:
      break;
  }
}

KrausSet kraus_ops(const ChannelSpec& spec) {
  spec.validate();
  const auto& s = pauli_ops();
  KrausSet k;
  switch (spec.kind) {
    case ChannelKind::depolarizing: {
      const double l = spec.lambda;
      k.ops = {std::sqrt(1.0 - 0.75 * l) * s[0], 0.5 * std::sqrt(l) * s[1],
               0.5 * std::sqrt(l) * s[2], 0.5 * std::sqrt(l) * s[3]};
      break;
    }
    case ChannelKind::dephasing:
      k.ops = {std::sqrt(1.0 - 0.5 * spec.p) * s[0],
               std::sqrt(0.5 * spec.p) * s[3]};
      break;
    case ChannelKind::amplitude_damping: {
      Mat2c k0 = Mat2c::Zero(), k1 = Mat2c::Zero();
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(1.0 - spec.p);
      k1(0, 1) = std::sqrt(spec.p);
      k.ops = {k0, k1};
      break;
    }
    case ChannelKind::rotation: {
      const complexd iu(0.0, 1.0);
      const Mat2c n_sigma =
          spec.axis[0] * s[1] + spec.axis[1] * s[2] + spec.axis[2] * s[3];
      k.ops = {std::cos(0.5 * spec.angle) * s[0] -
               iu * std::sin(0.5 * spec.angle) * n_sigma};
      break;
    }
    case ChannelKind::null_channel:
      k.ops = {s[0]};
      break;
  }
  return k;
}

Ptm make_channel(const ChannelSpec& spec) {
  if (spec.kind == ChannelKind::null_channel) return Ptm{};
  return kraus_to_ptm(kraus_ops(spec));
}

double depol_gate_error(double p) {
  if (p < 0.0 || p > 0.25)
    throw std::invalid_argument("depol_gate_error: p outside [0, 1/4]");
  return 2.0 * p;
}

double overrotation_gate_error(double eps_radians) {
  if (eps_radians < 0.0 || eps_radians > M_PI)
    throw std::invalid_argument("overrotation_gate_error: angle outside [0, pi]");
  return (2.0 - 2.0 * std::cos(eps_radians)) / 6.0;
}

const char* channel_kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::depolarizing: return "depolarizing";
    case ChannelKind::dephasing: return "dephasing";
    case ChannelKind::amplitude_damping: return "amplitude_damping";
    case ChannelKind::rotation: return "rotation";
    case ChannelKind::null_channel: return "null";
  }
  return "unknown";
}

}  // namespace qgst
