// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/channels.hpp"
#include "qgst/gateset.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgst {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Noise attached to an ideal gate set: channels post-composed on each gate,
/// plus channels corrupting the prepared state and the measurement effect.
/// The null gate (index 0) may not carry an error.
struct ErrorModel {
  std::vector<std::vector<ChannelSpec>> gate_post;  // indexed by gate
  std::vector<ChannelSpec> rho_errors;
  std::vector<ChannelSpec> effect_errors;

  bool empty() const;
  void validate(int n_gates) const;
};

GateSet build_true_gateset(const GateSet& ideal, const ErrorModel& em);

/// shots == 0 marks an exact (infinite-shot) record: mean stores the true
/// probability and successes is unused.
struct ExperimentRecord {
  int i = 0;
  int j = -1;
  int k = -1;
  std::uint64_t shots = 0;
  std::uint64_t successes = 0;
  double mean = 0.0;

  Circuit circuit() const { return Circuit{i, j, k}; }
};

struct Dataset {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<ExperimentRecord> records;
  int n_fiducials = 4;
  int n_gates = 4;
  std::optional<GateSet> truth;       // ground-truth bookkeeping only
  std::string spam_injection = "none";  // which of rho/effect carried noise
};

/// Canonical circuit list: all (i, j, k), then the pure fiducial pairs
/// (i, j, -1), then the single-fiducial rows (i, -1, -1). With four
/// fiducials and four gates this is 64 + 16 + 4 = 84 circuits.
std::vector<Circuit> standard_circuits(int n_fid, int n_gates);

/// Draws each record from Binomial(shots, p) by counting Bernoulli trials on
/// a per-circuit substream, so results do not depend on evaluation order.
/// shots == 0 stores the exact probabilities.
Dataset run_protocol(const GateSet& true_gs, std::uint64_t shots,
                     std::uint64_t seed);

/// Serial reference for run_protocol; produces identical records.
Dataset run_protocol_serial(const GateSet& true_gs, std::uint64_t shots,
                            std::uint64_t seed);

/// Throws DataError naming the first missing (i, j, k) cell.
void validate_complete(const Dataset& d);

std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t circuit_stream_seed(std::uint64_t seed, std::uint64_t index);
std::uint64_t sample_binomial(std::uint64_t n, double p, std::uint64_t stream_seed);

std::string config_hash_of(const GateSet& gs, std::uint64_t shots);

}  // namespace qgst
