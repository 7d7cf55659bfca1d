// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

// Test-only oracle: circuits evaluated by explicit 2x2 density-matrix
// evolution with Kraus operators, kept independent of the PTM algebra it
// cross-checks. The Kraus constructors here are written out longhand on
// purpose and must not call into the library's channel builders.

#pragma once

#include "qgst/pauli.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qgst::testing {

struct OracleChannel {
  std::vector<Mat2c> kraus;
};

Mat2c oracle_apply(const OracleChannel& ch, const Mat2c& rho);

/// Tr{E (C_L ... C_1)(rho)}, channels applied first-to-last.
double oracle_probability(const Mat2c& rho, const Mat2c& effect,
                          const std::vector<OracleChannel>& circuit);

// Named channels, written from their defining maps.
OracleChannel oracle_depolarizing(double lambda);
OracleChannel oracle_dephasing(double p);
OracleChannel oracle_amplitude_damping(double p);
OracleChannel oracle_rotation(double nx, double ny, double nz, double angle);
OracleChannel oracle_identity();

/// The map (1 - 3p) rho + p (X rho X + Y rho Y + Z rho Z).
Mat2c depol_gate_map(double p, const Mat2c& rho);

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double gauss() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(engine);
  }
  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(engine);
  }
};

Mat2c random_unitary(Rng& rng);
Mat2c random_density(Rng& rng);

/// Random CPTP channel via a Stinespring-style draw: Gaussian blocks
/// renormalized so the completeness condition holds exactly.
OracleChannel random_cptp(Rng& rng, int n_kraus = 3);

/// Well-conditioned random invertible matrix (singular values in [1/2, 2]).
Mat4 random_invertible(Rng& rng);

}  // namespace qgst::testing
