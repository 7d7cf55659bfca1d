// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/sweep.hpp"

#include "qgst/json_io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qgst {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::overrotation_y: return "overrotation_y";
    case ErrorKind::depolarizing_all: return "depolarizing_all";
    case ErrorKind::spam_depolarizing_rho: return "spam_depolarizing_rho";
    case ErrorKind::overrotation_with_sampling: return "overrotation_with_sampling";
  }
  return "unknown";
}

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::lgst: return "lgst";
    case Estimator::gst_mle: return "gst_mle";
    case Estimator::qpt_mle: return "qpt_mle";
  }
  return "unknown";
}

ErrorKind parse_error_kind(const std::string& s) {
  if (s == "overrotation_y") return ErrorKind::overrotation_y;
  if (s == "depolarizing_all") return ErrorKind::depolarizing_all;
  if (s == "spam_depolarizing_rho") return ErrorKind::spam_depolarizing_rho;
  if (s == "overrotation_with_sampling")
    return ErrorKind::overrotation_with_sampling;
  throw ConfigError("unknown error kind: " + s);
}

Estimator parse_estimator(const std::string& s) {
  if (s == "lgst") return Estimator::lgst;
  if (s == "gst_mle") return Estimator::gst_mle;
  if (s == "qpt_mle") return Estimator::qpt_mle;
  throw ConfigError("unknown estimator: " + s);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (std::log10(hi) - std::log10(lo)) / (n - 1);
  for (int i = 0; i < n; ++i)
    out.push_back(std::pow(10.0, std::log10(lo) + step * i));
  return out;
}

void SweepConfig::validate() const {
  if (magnitudes.empty()) throw ConfigError("sweep grid is empty");
  for (double m : magnitudes) {
    if (!(m > 0.0)) throw ConfigError("sweep magnitudes must be positive");
    if (kind == ErrorKind::overrotation_y ||
        kind == ErrorKind::overrotation_with_sampling) {
      if (m >= 2.0 / 3.0)
        throw ConfigError("over-rotation gate error must stay below 2/3");
    } else if (m > 0.5) {
      throw ConfigError("depolarizing gate error must stay at or below 1/2");
    }
  }
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (estimators.empty()) throw ConfigError("no estimators selected");
  if (spam_overlap < 0.0 || spam_overlap > 0.5)
    throw ConfigError("spam_overlap outside [0, 1/2]");
}

SweepConfig default_sweep_config(ErrorKind kind) {
  SweepConfig cfg;
  cfg.kind = kind;
  cfg.magnitudes = log_spaced(1e-5, 1e-1, 13);
  if (kind == ErrorKind::overrotation_with_sampling) {
    cfg.shots = 10000;
    cfg.seeds = {1, 2, 3, 4, 5};
  } else {
    cfg.shots = 0;
    cfg.seeds = {0};
  }
  return cfg;
}

ErrorModel error_model_for(ErrorKind kind, double magnitude,
                           double spam_overlap) {
  ErrorModel em;
  em.gate_post.assign(4, {});
  const Eigen::Vector3d yhat{0.0, 1.0, 0.0};
  switch (kind) {
    case ErrorKind::overrotation_y: {
      const double eps = std::acos(1.0 - 3.0 * magnitude);
      em.gate_post[2] = {ChannelSpec::rotation(yhat, eps)};
      break;
    }
    case ErrorKind::depolarizing_all: {
      const double lambda = 2.0 * magnitude;  // gate error 2p with lambda = 4p
      for (int k = 1; k < 4; ++k)
        em.gate_post[k] = {ChannelSpec::depolarizing(lambda)};
      break;
    }
    case ErrorKind::spam_depolarizing_rho: {
      em.rho_errors = {ChannelSpec::depolarizing(2.0 * magnitude)};
      break;
    }
    case ErrorKind::overrotation_with_sampling: {
      const double eps = std::acos(1.0 - 3.0 * magnitude);
      em.gate_post[2] = {ChannelSpec::rotation(yhat, eps)};
      em.rho_errors = {ChannelSpec::depolarizing(2.0 * spam_overlap)};
      break;
    }
  }
  return em;
}

EstimationError estimation_error(const GateSet& estimate, const GateSet& truth,
                                 double cptp_tol) {
  bool physical = true;
  for (const auto& g : estimate.gates) {
    const auto diag = is_cptp(g, cptp_tol);
    if (!diag.cp_ok || !diag.tp_ok) {
      physical = false;
      break;
    }
  }
  EstimationError out;
  double total = 0.0;
  int count = 0;
  for (int k = 1; k < estimate.num_gates(); ++k) {
    if (physical) {
      total += 1.0 - avg_fidelity(truth.gates[k], estimate.gates[k]);
    } else {
      total += spectral_distance(estimate.gates[k], truth.gates[k]);
    }
    ++count;
  }
  out.value = total / count;
  out.metric = physical ? "infidelity" : "spectral";
  return out;
}

namespace {

struct TaskOutput {
  std::vector<SweepRow> rows;
};

double realized_error(ErrorKind kind, const GateSet& truth,
                      const GateSet& ideal) {
  if (kind == ErrorKind::spam_depolarizing_rho) {
    return expectation(ideal.effect, truth.rho);
  }
  // worst per-gate infidelity against the ideal gates
  double worst = 0.0;
  for (int k = 1; k < truth.num_gates(); ++k) {
    worst = std::max(worst, 1.0 - avg_fidelity(ideal.gates[k], truth.gates[k]));
  }
  return worst;
}

TaskOutput run_task(const SweepConfig& cfg, int m_idx, std::uint64_t seed) {
  const GateSet ideal = ideal_gateset();
  const double magnitude = cfg.magnitudes[m_idx];
  const ErrorModel em = error_model_for(cfg.kind, magnitude, cfg.spam_overlap);
  const GateSet truth = build_true_gateset(ideal, em);
  Dataset data = run_protocol(truth, cfg.shots, seed);
  if (!em.rho_errors.empty() && !em.effect_errors.empty()) {
    data.spam_injection = "both";
  } else if (!em.rho_errors.empty()) {
    data.spam_injection = "rho";
  } else if (!em.effect_errors.empty()) {
    data.spam_injection = "effect";
  }

  Objective obj;
  obj.kind = (cfg.shots == 0) ? Objective::Kind::unweighted
                              : Objective::Kind::weighted;

  TaskOutput out;
  for (const Estimator est : cfg.estimators) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.kind = cfg.kind;
    row.magnitude_index = m_idx;
    row.magnitude = magnitude;
    row.gate_error = realized_error(cfg.kind, truth, ideal);
    row.estimator = est;
    row.seed = seed;

    GateSet estimate = ideal;
    switch (est) {
      case Estimator::lgst: {
        const LgstResult lr = run_lgst(data, ideal);
        estimate = lr.gauge.estimate;
        row.objective_final = lr.gauge.final_objective;
        break;
      }
      case Estimator::gst_mle: {
        const LgstResult lr = run_lgst(data, ideal);
        const FitResult fr = fit(data, lr.physical, obj);
        estimate = fr.estimate;
        row.objective_final = fr.report.final_objective;
        break;
      }
      case Estimator::qpt_mle: {
        const QptDesign design = QptDesign::from_target(ideal);
        double objective = 0.0;
        estimate = ideal;
        for (int k = 1; k < ideal.num_gates(); ++k) {
          Objective ok = obj;
          ok.gate_scope = k;
          const QptFitResult qr =
              qpt_mle(data, k, design, ideal.gates[k], ok);
          estimate.gates[k] = qr.estimate;
          objective += qr.report.final_objective;
        }
        row.objective_final = objective;
        break;
      }
    }

    const EstimationError err = estimation_error(estimate, truth);
    row.metric = err.metric;
    row.estimation_error = err.value;
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    out.rows.push_back(row);

    if (!cfg.estimates_dir.empty()) {
      namespace fs = std::filesystem;
      fs::create_directories(cfg.estimates_dir);
      save_gateset(estimate,
                   (fs::path(cfg.estimates_dir) / sweep_row_estimate_filename(row))
                       .string());
      save_gateset(truth, (fs::path(cfg.estimates_dir) /
                           sweep_truth_filename(cfg.kind, m_idx, seed))
                              .string());
    }
  }
  return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, bool parallel) {
  cfg.validate();
  const int n_mag = static_cast<int>(cfg.magnitudes.size());
  const int n_seed = static_cast<int>(cfg.seeds.size());
  const int n_tasks = n_mag * n_seed;
  std::vector<TaskOutput> outputs(n_tasks);
  std::vector<std::string> failures(n_tasks);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int t = 0; t < n_tasks; ++t) {
    const int m_idx = t / n_seed;
    const int s_idx = t % n_seed;
    try {
      outputs[t] = run_task(cfg, m_idx, cfg.seeds[s_idx]);
    } catch (const std::exception& e) {
      failures[t] = e.what();  // recorded per task, the sweep continues
    }
  }

  std::vector<SweepRow> rows;
  for (int t = 0; t < n_tasks; ++t) {
    if (!failures[t].empty()) {
      SweepRow row;
      row.kind = cfg.kind;
      row.magnitude_index = t / n_seed;
      row.magnitude = cfg.magnitudes[t / n_seed];
      row.estimator = cfg.estimators.front();
      row.seed = cfg.seeds[t % n_seed];
      row.metric = "failed: " + failures[t];
      row.estimation_error = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
      continue;
    }
    for (const auto& r : outputs[t].rows) rows.push_back(r);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open CSV output path: " + path);
  const std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  f << "# generated " << stamp << "\n";
  f << "error_kind,magnitude,gate_error,estimator,metric,estimation_error,"
       "objective_final,seed,wall_ms\n";
  f.precision(12);
  for (const auto& r : rows) {
    f << error_kind_name(r.kind) << ',' << r.magnitude << ',' << r.gate_error
      << ',' << estimator_name(r.estimator) << ',' << r.metric << ','
      << r.estimation_error << ',' << r.objective_final << ',' << r.seed << ','
      << r.wall_ms << "\n";
  }
}

std::string sweep_row_estimate_filename(const SweepRow& row) {
  std::ostringstream name;
  name << error_kind_name(row.kind) << "_m" << row.magnitude_index << "_s"
       << row.seed << "_" << estimator_name(row.estimator) << ".json";
  return name.str();
}

std::string sweep_truth_filename(ErrorKind kind, int magnitude_index,
                                 std::uint64_t seed) {
  std::ostringstream name;
  name << error_kind_name(kind) << "_m" << magnitude_index << "_s" << seed
       << "_truth.json";
  return name.str();
}

}  // namespace qgst
