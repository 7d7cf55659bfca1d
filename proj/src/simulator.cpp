// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/simulator.hpp"

#include "qgst/json_io.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qgst {

bool ErrorModel::empty() const {
  for (const auto& list : gate_post)
    if (!list.empty()) return false;
  return rho_errors.empty() && effect_errors.empty();
}

void ErrorModel::validate(int n_gates) const {
  if (static_cast<int>(gate_post.size()) > n_gates)
    throw std::invalid_argument("error model addresses more gates than exist");
  if (!gate_post.empty() && !gate_post[0].empty())
    throw std::invalid_argument("the null gate must remain an exact identity");
  auto check = [](const ChannelSpec& spec) {
    spec.validate();
    const auto diag = is_cptp(make_channel(spec), 1e-9);
    if (!diag.cp_ok || !diag.tp_ok)
      throw std::invalid_argument("error channel is not CPTP");
  };
  for (const auto& list : gate_post)
    for (const auto& spec : list) check(spec);
  for (const auto& spec : rho_errors) check(spec);
  for (const auto& spec : effect_errors) check(spec);
}

GateSet build_true_gateset(const GateSet& ideal, const ErrorModel& em) {
  ideal.validate();
  em.validate(ideal.num_gates());
  GateSet gs = ideal;
  for (std::size_t k = 0; k < em.gate_post.size(); ++k) {
    for (const auto& spec : em.gate_post[k]) {
      gs.gates[k].m = make_channel(spec).m * gs.gates[k].m;
    }
  }
  for (const auto& spec : em.rho_errors) {
    gs.rho = apply_channel(make_channel(spec), gs.rho);
  }
  for (const auto& spec : em.effect_errors) {
    gs.effect.c = apply_to_effect(make_channel(spec), gs.effect.c);
  }
  return gs;
}

std::vector<Circuit> standard_circuits(int n_fid, int n_gates) {
  std::vector<Circuit> cs;
  cs.reserve(static_cast<std::size_t>(n_fid) * n_fid * (n_gates + 1) + n_fid);
  for (int k = 0; k < n_gates; ++k)
    for (int i = 0; i < n_fid; ++i)
      for (int j = 0; j < n_fid; ++j) cs.push_back(Circuit{i, j, k});
  for (int i = 0; i < n_fid; ++i)
    for (int j = 0; j < n_fid; ++j) cs.push_back(Circuit{i, j, -1});
  for (int i = 0; i < n_fid; ++i) cs.push_back(Circuit{i, -1, -1});
  return cs;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t circuit_stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

std::uint64_t sample_binomial(std::uint64_t n, double p,
                              std::uint64_t stream_seed) {
  std::mt19937_64 rng(stream_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uint64_t successes = 0;
  for (std::uint64_t r = 0; r < n; ++r) {
    if (u(rng) < p) ++successes;
  }
  return successes;
}

namespace {

ExperimentRecord make_record(const GateSet& gs, const Circuit& c,
                             std::uint64_t shots, std::uint64_t seed,
                             std::uint64_t index) {
  double p = circuit_probability(gs, c);
  if (p < -1e-9 || p > 1.0 + 1e-9)
    throw std::invalid_argument("circuit probability outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);

  ExperimentRecord rec;
  rec.i = c.i;
  rec.j = c.j;
  rec.k = c.k;
  rec.shots = shots;
  if (shots == 0) {
    rec.mean = p;
  } else {
    rec.successes = sample_binomial(shots, p, circuit_stream_seed(seed, index));
    rec.mean = static_cast<double>(rec.successes) / static_cast<double>(shots);
  }
  return rec;
}

Dataset protocol_common(const GateSet& gs, std::uint64_t shots,
                        std::uint64_t seed) {
  gs.validate();
  Dataset d;
  d.seed = seed;
  d.n_fiducials = gs.fiducials.size();
  d.n_gates = gs.num_gates();
  d.config_hash = config_hash_of(gs, shots);
  d.truth = gs;
  return d;
}

}  // namespace

Dataset run_protocol(const GateSet& true_gs, std::uint64_t shots,
                     std::uint64_t seed) {
  Dataset d = protocol_common(true_gs, shots, seed);
  const auto circuits = standard_circuits(d.n_fiducials, d.n_gates);
  d.records.resize(circuits.size());
  const std::int64_t n = static_cast<std::int64_t>(circuits.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t idx = 0; idx < n; ++idx) {
    d.records[idx] = make_record(true_gs, circuits[idx], shots, seed,
                                 static_cast<std::uint64_t>(idx));
  }
  return d;
}

Dataset run_protocol_serial(const GateSet& true_gs, std::uint64_t shots,
                            std::uint64_t seed) {
  Dataset d = protocol_common(true_gs, shots, seed);
  const auto circuits = standard_circuits(d.n_fiducials, d.n_gates);
  d.records.reserve(circuits.size());
  for (std::size_t idx = 0; idx < circuits.size(); ++idx) {
    d.records.push_back(
        make_record(true_gs, circuits[idx], shots, seed, idx));
  }
  return d;
}

void validate_complete(const Dataset& d) {
  const auto circuits = standard_circuits(d.n_fiducials, d.n_gates);
  std::vector<bool> seen(circuits.size(), false);
  auto index_of = [&](const ExperimentRecord& r) -> std::int64_t {
    for (std::size_t c = 0; c < circuits.size(); ++c) {
      if (circuits[c].i == r.i && circuits[c].j == r.j && circuits[c].k == r.k)
        return static_cast<std::int64_t>(c);
    }
    return -1;
  };
  for (const auto& r : d.records) {
    const std::int64_t c = index_of(r);
    if (c >= 0) seen[c] = true;
  }
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    if (!seen[c]) {
      std::ostringstream msg;
      msg << "dataset is missing circuit (i=" << circuits[c].i
          << ", j=" << circuits[c].j << ", k=" << circuits[c].k << ")";
      throw DataError(msg.str());
    }
  }
}

std::string config_hash_of(const GateSet& gs, std::uint64_t shots) {
  const std::string text =
      gateset_to_json(gs).dump() + ":" + std::to_string(shots);
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

}  // namespace qgst
