// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/lgst.hpp"
#include "qgst/mle.hpp"
#include "qgst/qpt.hpp"
#include "qgst/simulator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgst {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ErrorKind {
  overrotation_y,
  depolarizing_all,
  spam_depolarizing_rho,
  overrotation_with_sampling,
};

enum class Estimator { lgst, gst_mle, qpt_mle };

const char* error_kind_name(ErrorKind k);
const char* estimator_name(Estimator e);
ErrorKind parse_error_kind(const std::string& s);
Estimator parse_estimator(const std::string& s);

/// One study: a grid of error magnitudes (gate error, or state error for the
/// SPAM kind), estimated by the selected methods on simulated data.
struct SweepConfig {
  ErrorKind kind = ErrorKind::overrotation_y;
  std::vector<double> magnitudes;  // defaults to 13 log-spaced in [1e-5, 1e-1]
  std::uint64_t shots = 0;         // 0 = exact probabilities
  std::vector<std::uint64_t> seeds{0};
  std::vector<Estimator> estimators{Estimator::lgst, Estimator::gst_mle,
                                    Estimator::qpt_mle};
  double spam_overlap = 0.01;      // <<E|rho>> for the sampling study
  std::string estimates_dir;       // emit per-row gate-set JSONs when set

  void validate() const;
};

SweepConfig default_sweep_config(ErrorKind kind);

std::vector<double> log_spaced(double lo, double hi, int n);

/// Channel parameters realizing a requested magnitude for the given kind.
ErrorModel error_model_for(ErrorKind kind, double magnitude,
                           double spam_overlap);

struct SweepRow {
  ErrorKind kind;
  int magnitude_index = 0;
  double magnitude = 0.0;
  double gate_error = 0.0;  // realized value (state error for the SPAM kind)
  Estimator estimator;
  std::string metric;       // "infidelity" or "spectral"
  double estimation_error = 0.0;
  double objective_final = 0.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

/// Runs every (grid point, seed) task, in parallel unless told otherwise.
/// Rows come back ordered by (grid index, seed index, estimator index)
/// regardless of completion order.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, bool parallel = true);

/// Mean over the non-null gates of per-gate infidelity when every estimated
/// gate passes is_cptp, otherwise of spectral distance.
struct EstimationError {
  double value = 0.0;
  std::string metric;
};
EstimationError estimation_error(const GateSet& estimate, const GateSet& truth,
                                 double cptp_tol = 1e-6);

/// First line is a timestamp comment; everything below is deterministic for
/// a fixed config and seed list, except the wall_ms column.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Deterministic name for the gate-set JSON a row was computed from.
std::string sweep_row_estimate_filename(const SweepRow& row);
std::string sweep_truth_filename(ErrorKind kind, int magnitude_index,
                                 std::uint64_t seed);

}  // namespace qgst
