// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/json_io.hpp"
#include "qgst/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

namespace {

using namespace qgst;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGram = 3;
constexpr int kExitFit = 4;

GateSet gateset_from_config(const json& cfg) {
  if (!cfg.contains("gate_set")) return ideal_gateset();
  const json& g = cfg.at("gate_set");
  if (g.is_string()) {
    const std::string name = g.get<std::string>();
    if (name == "standard") return ideal_gateset();
    if (name == "minimal") return ideal_gateset_minimal();
    throw ConfigError("unknown gate_set name: " + name);
  }
  return gateset_from_json(g);
}

Mat4 analytic_gram(const GateSet& gs) {
  Mat4 g;
  for (int i = 0; i < gs.fiducials.size(); ++i)
    for (int j = 0; j < gs.fiducials.size(); ++j)
      g(i, j) = circuit_probability(gs, Circuit{i, j, -1});
  return g;
}

void print_gram(const GramDiagnostics& gd, std::uint64_t shots) {
  std::cout << "Gram eigenvalues:";
  for (const auto& e : gd.eigenvalues) {
    std::cout << " " << e.real();
    if (std::abs(e.imag()) > 1e-12) std::cout << (e.imag() < 0 ? "-" : "+")
                                              << std::abs(e.imag()) << "i";
  }
  std::cout << "\nmin |eigenvalue| = " << gd.min_abs_eigenvalue
            << " (threshold " << gd.threshold << ") -> "
            << (gd.invertible ? "invertible" : "NOT invertible") << "\n";
  if (shots > 0) {
    const double n = static_cast<double>(shots);
    std::cout << "sampling std bound per record: 1/(2 sqrt(N)) = "
              << 0.5 / std::sqrt(n) << ", quarter bound 1/(4 sqrt(N)) = "
              << 0.25 / std::sqrt(n) << "\n";
  }
}

int cmd_simulate(const std::string& config_path,
                 std::optional<std::uint64_t> seed_flag,
                 std::optional<std::uint64_t> shots_flag,
                 const std::string& out_path) {
  json cfg = json::object();
  if (!config_path.empty()) cfg = load_json_file(config_path);

  GateSet ideal = gateset_from_config(cfg);
  if (cfg.contains("fiducials")) {
    ideal.fiducials.seqs =
        cfg.at("fiducials").get<std::vector<std::vector<int>>>();
    ideal.validate();
  }
  const ErrorModel em = error_model_from_json(cfg.value("error_model", json::object()),
                                              ideal.num_gates());
  const std::uint64_t shots =
      shots_flag.value_or(cfg.value("shots", std::uint64_t{0}));
  const std::uint64_t seed = seed_flag.value_or(cfg.value("seed", std::uint64_t{0}));

  const GateSet truth = build_true_gateset(ideal, em);
  const GramDiagnostics gd = gram_diagnostics(analytic_gram(truth));
  print_gram(gd, shots);
  if (!gd.invertible) {
    std::cerr << "error: the configured fiducials are too close to linearly "
                 "dependent; adjust the experiment design\n";
    return kExitGram;
  }

  Dataset d = run_protocol(truth, shots, seed);
  if (!em.rho_errors.empty() && !em.effect_errors.empty())
    d.spam_injection = "both";
  else if (!em.rho_errors.empty())
    d.spam_injection = "rho";
  else if (!em.effect_errors.empty())
    d.spam_injection = "effect";
  save_dataset(d, out_path);
  std::cout << "wrote " << d.records.size() << " records to " << out_path
            << " (seed " << seed << ", "
            << (shots == 0 ? std::string("exact probabilities")
                           : std::to_string(shots) + " shots")
            << ")\n";
  return kExitOk;
}

json per_gate_metrics(const GateSet& estimate, const GateSet& reference) {
  bool physical = true;
  for (const auto& g : estimate.gates) {
    const auto diag = is_cptp(g, 1e-6);
    if (!diag.cp_ok || !diag.tp_ok) physical = false;
  }
  json rows = json::array();
  for (int k = 1; k < estimate.num_gates(); ++k) {
    double value;
    const char* metric;
    if (physical) {
      value = 1.0 - avg_fidelity(reference.gates[k], estimate.gates[k]);
      metric = "infidelity";
    } else {
      value = spectral_distance(estimate.gates[k], reference.gates[k]);
      metric = "spectral";
    }
    rows.push_back({{"label", estimate.labels[k]},
                    {"metric", metric},
                    {"value", value}});
  }
  return rows;
}

void print_metric_table(const char* title, const json& rows) {
  std::cout << title << "\n";
  for (const auto& r : rows) {
    std::printf("  %-8s %-10s %.6e\n", r.at("label").get<std::string>().c_str(),
                r.at("metric").get<std::string>().c_str(),
                r.at("value").get<double>());
  }
}

int cmd_estimate(const std::string& data_path, const std::string& method,
                 const std::string& target_path, const std::string& out_path,
                 const std::string& svg_path, double gram_threshold) {
  const Dataset d = load_dataset(data_path);
  validate_complete(d);
  const GateSet target =
      target_path.empty() ? ideal_gateset() : load_gateset(target_path);

  json report{{"method", method}, {"data", data_path}};
  GateSet estimate = target;
  bool fit_ok = true;

  if (method == "lgst" || method == "gst_mle") {
    const LgstResult lr = run_lgst(d, target, gram_threshold);
    report["gram"] = gram_diagnostics_to_json(lr.gram);
    report["gauge"] = gauge_result_to_json(lr.gauge);
    estimate = lr.gauge.estimate;
    if (method == "gst_mle") {
      Objective obj;
      obj.kind = (d.records.front().shots == 0) ? Objective::Kind::unweighted
                                                : Objective::Kind::weighted;
      const FitResult fr = fit(d, lr.physical, obj);
      estimate = fr.estimate;
      report["fit"] = fit_report_to_json(fr.report);
      report["binomial_log_likelihood"] =
          binomial_log_likelihood(fr.estimate, d);
      fit_ok = fr.report.converged;
    }
  } else if (method == "qpt_mle") {
    const QptDesign design = QptDesign::from_target(target);
    Objective obj;
    obj.kind = (d.records.front().shots == 0) ? Objective::Kind::unweighted
                                              : Objective::Kind::weighted;
    json fits = json::array();
    for (int k = 1; k < target.num_gates(); ++k) {
      Objective ok = obj;
      ok.gate_scope = k;
      const QptFitResult qr = qpt_mle(d, k, design, target.gates[k], ok);
      estimate.gates[k] = qr.estimate;
      fits.push_back(fit_report_to_json(qr.report));
      fit_ok = fit_ok && qr.report.converged;
    }
    report["fits"] = fits;
  } else {
    throw ConfigError("unknown method: " + method +
                      " (expected lgst, gst_mle, or qpt_mle)");
  }

  report["estimate"] = gateset_to_json(estimate);
  report["metrics_vs_target"] = per_gate_metrics(estimate, target);
  if (d.truth) {
    report["metrics_vs_truth"] = per_gate_metrics(estimate, *d.truth);
  }

  std::vector<std::pair<std::string, const GateSet*>> columns;
  if (d.truth) columns.push_back({"actual", &*d.truth});
  columns.push_back({"estimate (" + method + ")", &estimate});
  columns.push_back({"target", &target});
  std::cout << format_ptm_tables(columns);
  print_metric_table("per-gate error vs target:", report["metrics_vs_target"]);
  if (d.truth)
    print_metric_table("per-gate error vs actual:", report["metrics_vs_truth"]);

  if (!out_path.empty()) write_json_file(report, out_path);
  if (!svg_path.empty()) write_ptm_svg(svg_path, columns);

  if (!fit_ok) {
    std::cerr << "error: the fit did not converge; best iterate written\n";
    return kExitFit;
  }
  return kExitOk;
}

SweepConfig sweep_config_from_json(const json& cfg) {
  SweepConfig sc = default_sweep_config(
      parse_error_kind(cfg.value("error_kind", "overrotation_y")));
  if (cfg.contains("magnitudes")) {
    const json& m = cfg.at("magnitudes");
    if (m.is_array()) {
      sc.magnitudes = m.get<std::vector<double>>();
    } else {
      sc.magnitudes = log_spaced(m.at("min").get<double>(),
                                 m.at("max").get<double>(),
                                 m.at("count").get<int>());
    }
  }
  if (cfg.contains("shots")) sc.shots = cfg.at("shots").get<std::uint64_t>();
  if (cfg.contains("seeds"))
    sc.seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
  if (cfg.contains("estimators")) {
    sc.estimators.clear();
    for (const auto& e : cfg.at("estimators"))
      sc.estimators.push_back(parse_estimator(e.get<std::string>()));
  }
  if (cfg.contains("spam_overlap"))
    sc.spam_overlap = cfg.at("spam_overlap").get<double>();
  if (cfg.contains("estimates_dir"))
    sc.estimates_dir = cfg.at("estimates_dir").get<std::string>();
  return sc;
}

int cmd_sweep(const std::string& config_path, const std::string& kind_flag,
              const std::string& out_path, const std::string& estimates_dir,
              bool serial) {
  SweepConfig sc = default_sweep_config(ErrorKind::overrotation_y);
  if (!config_path.empty()) {
    sc = sweep_config_from_json(load_json_file(config_path));
  }
  if (!kind_flag.empty()) {
    sc = default_sweep_config(parse_error_kind(kind_flag));
  }
  if (!estimates_dir.empty()) sc.estimates_dir = estimates_dir;

  const auto rows = run_sweep(sc, !serial);
  write_sweep_csv(rows, out_path);
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-qubit gate set tomography toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, data_path, target_path, svg_path;
  std::string method = "gst_mle", kind_flag, estimates_dir;
  std::optional<std::uint64_t> seed_flag, shots_flag;
  double gram_threshold = 0.1;
  bool serial = false;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->add_option("--config", config_path, "simulation config JSON");
  sim->add_option("--seed", seed_flag, "RNG seed (overrides config)");
  sim->add_option("--shots", shots_flag, "shots per circuit, 0 = exact");
  sim->add_option("--out", out_path, "dataset output path")->required();

  auto* est = app.add_subcommand("estimate", "estimate a gate set from data");
  est->add_option("--data", data_path, "dataset JSON")->required();
  est->add_option("--method", method, "lgst | gst_mle | qpt_mle");
  est->add_option("--target", target_path, "target gate set JSON (default built-in)");
  est->add_option("--out", out_path, "report output path");
  est->add_option("--svg", svg_path, "write the PTM grid as SVG");
  est->add_option("--gram-threshold", gram_threshold, "Gram eigenvalue floor");

  auto* swp = app.add_subcommand("sweep", "estimation error vs gate error study");
  swp->add_option("--config", config_path, "sweep config JSON");
  swp->add_option("--kind", kind_flag, "built-in study name (overrides config)");
  swp->add_option("--out", out_path, "CSV output path")->required();
  swp->add_option("--estimates-dir", estimates_dir, "directory for gate-set JSONs");
  swp->add_flag("--serial", serial, "disable the worker pool");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, seed_flag, shots_flag, out_path);
    if (est->parsed())
      return cmd_estimate(data_path, method, target_path, out_path, svg_path,
                          gram_threshold);
    if (swp->parsed())
      return cmd_sweep(config_path, kind_flag, out_path, estimates_dir, serial);
  } catch (const qgst::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qgst::IoError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qgst::GramError& e) {
    std::cerr << "Gram failure: " << e.what() << "\n";
    return kExitGram;
  } catch (const qgst::FitError& e) {
    std::cerr << "fit failure: " << e.what() << "\n";
    return kExitFit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
