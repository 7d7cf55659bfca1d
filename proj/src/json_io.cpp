// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/json_io.hpp"

#include <fstream>

namespace qgst {

namespace {
constexpr int kDatasetFormatVersion = 1;
}

json mat4_to_json(const Mat4& m) {
  json a = json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a.push_back(m(r, c));
  return a;
}

Mat4 mat4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 16)
    throw IoError("matrix must be a row-major array of 16 numbers");
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j[4 * r + c].get<double>();
  return m;
}

json vec4_to_json(const Vec4& v) {
  return json::array({v[0], v[1], v[2], v[3]});
}

Vec4 vec4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw IoError("vector must be an array of 4 numbers");
  Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = j[i].get<double>();
  return v;
}

json channel_spec_to_json(const ChannelSpec& spec) {
  json params = json::object();
  switch (spec.kind) {
    case ChannelKind::depolarizing:
      params["lambda"] = spec.lambda;
      break;
    case ChannelKind::dephasing:
    case ChannelKind::amplitude_damping:
      params["p"] = spec.p;
      break;
    case ChannelKind::rotation:
      params["axis"] = {spec.axis[0], spec.axis[1], spec.axis[2]};
      params["angle"] = spec.angle;
      break;
    case ChannelKind::null_channel:
      break;
  }
  return json{{"kind", channel_kind_name(spec.kind)}, {"params", params}};
}

ChannelSpec channel_spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  try {
    if (kind == "depolarizing")
      return ChannelSpec::depolarizing(params.at("lambda").get<double>());
    if (kind == "dephasing")
      return ChannelSpec::dephasing(params.at("p").get<double>());
    if (kind == "amplitude_damping")
      return ChannelSpec::amplitude_damping(params.at("p").get<double>());
    if (kind == "rotation") {
      const auto& ax = params.at("axis");
      Eigen::Vector3d axis{ax.at(0).get<double>(), ax.at(1).get<double>(),
                           ax.at(2).get<double>()};
      return ChannelSpec::rotation(axis, params.at("angle").get<double>());
    }
    if (kind == "null") return ChannelSpec::null();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed channel spec: ") + e.what());
  }
  throw IoError("unknown channel kind: " + kind);
}

json error_model_to_json(const ErrorModel& em) {
  json gate_errors = json::array();
  for (std::size_t k = 0; k < em.gate_post.size(); ++k) {
    if (em.gate_post[k].empty()) continue;
    json channels = json::array();
    for (const auto& spec : em.gate_post[k])
      channels.push_back(channel_spec_to_json(spec));
    gate_errors.push_back({{"gate", k}, {"channels", channels}});
  }
  json j{{"gate_errors", gate_errors}};
  if (!em.rho_errors.empty()) {
    json arr = json::array();
    for (const auto& s : em.rho_errors) arr.push_back(channel_spec_to_json(s));
    j["rho_error"] = arr;
  }
  if (!em.effect_errors.empty()) {
    json arr = json::array();
    for (const auto& s : em.effect_errors)
      arr.push_back(channel_spec_to_json(s));
    j["effect_error"] = arr;
  }
  return j;
}

ErrorModel error_model_from_json(const json& j, int n_gates) {
  ErrorModel em;
  em.gate_post.assign(n_gates, {});
  for (const auto& entry : j.value("gate_errors", json::array())) {
    const int gate = entry.at("gate").get<int>();
    if (gate < 0 || gate >= n_gates)
      throw IoError("error model addresses a gate outside the set");
    for (const auto& spec : entry.at("channels"))
      em.gate_post[gate].push_back(channel_spec_from_json(spec));
  }
  if (j.contains("rho_error")) {
    for (const auto& spec : j.at("rho_error"))
      em.rho_errors.push_back(channel_spec_from_json(spec));
  }
  if (j.contains("effect_error")) {
    for (const auto& spec : j.at("effect_error"))
      em.effect_errors.push_back(channel_spec_from_json(spec));
  }
  return em;
}

json gateset_to_json(const GateSet& gs) {
  json gates = json::array();
  for (int k = 0; k < gs.num_gates(); ++k) {
    const std::string label =
        k < static_cast<int>(gs.labels.size()) ? gs.labels[k] : "G" + std::to_string(k);
    gates.push_back({{"label", label}, {"ptm", mat4_to_json(gs.gates[k].m)}});
  }
  return json{{"rho", vec4_to_json(gs.rho.c)},
              {"effect", vec4_to_json(gs.effect.c)},
              {"gates", gates},
              {"fiducials", gs.fiducials.seqs}};
}

GateSet gateset_from_json(const json& j) {
  GateSet gs;
  try {
    gs.rho = HSVector{vec4_from_json(j.at("rho")), HSRole::state};
    gs.effect = HSVector{vec4_from_json(j.at("effect")), HSRole::effect};
    for (const auto& g : j.at("gates")) {
      gs.labels.push_back(g.at("label").get<std::string>());
      gs.gates.push_back(Ptm{mat4_from_json(g.at("ptm"))});
    }
    gs.fiducials.seqs =
        j.at("fiducials").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed gate set: ") + e.what());
  }
  gs.validate();
  return gs;
}

json dataset_to_json(const Dataset& d) {
  json records = json::array();
  for (const auto& r : d.records) {
    records.push_back({{"i", r.i},
                       {"j", r.j},
                       {"k", r.k},
                       {"n", r.shots},
                       {"successes", r.successes},
                       {"mean", r.mean}});
  }
  json j{{"format_version", kDatasetFormatVersion},
         {"seed", d.seed},
         {"config_hash", d.config_hash},
         {"records", records},
         {"n_fiducials", d.n_fiducials},
         {"n_gates", d.n_gates},
         {"spam_injection", d.spam_injection}};
  if (d.truth) j["truth"] = gateset_to_json(*d.truth);
  return j;
}

Dataset dataset_from_json(const json& j) {
  Dataset d;
  try {
    const int version = j.value("format_version", -1);
    if (version != kDatasetFormatVersion)
      throw IoError("dataset format version mismatch: expected " +
                    std::to_string(kDatasetFormatVersion) + ", got " +
                    std::to_string(version));
    d.seed = j.at("seed").get<std::uint64_t>();
    d.config_hash = j.at("config_hash").get<std::string>();
    d.n_fiducials = j.value("n_fiducials", 4);
    d.n_gates = j.value("n_gates", 4);
    d.spam_injection = j.value("spam_injection", "none");
    for (const auto& rj : j.at("records")) {
      ExperimentRecord r;
      r.i = rj.at("i").get<int>();
      r.j = rj.at("j").get<int>();
      r.k = rj.at("k").get<int>();
      r.shots = rj.at("n").get<std::uint64_t>();
      r.successes = rj.at("successes").get<std::uint64_t>();
      r.mean = rj.at("mean").get<double>();
      d.records.push_back(r);
    }
    if (j.contains("truth")) d.truth = gateset_from_json(j.at("truth"));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed dataset: ") + e.what());
  }
  return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
  write_json_file(dataset_to_json(d), path);
}

Dataset load_dataset(const std::string& path) {
  return dataset_from_json(load_json_file(path));
}

void save_gateset(const GateSet& gs, const std::string& path) {
  write_json_file(gateset_to_json(gs), path);
}

GateSet load_gateset(const std::string& path) {
  return gateset_from_json(load_json_file(path));
}

json gram_diagnostics_to_json(const GramDiagnostics& gd) {
  json eigs = json::array();
  for (const auto& e : gd.eigenvalues) eigs.push_back({e.real(), e.imag()});
  return json{{"eigenvalues", eigs},
              {"min_abs_eigenvalue", gd.min_abs_eigenvalue},
              {"threshold", gd.threshold},
              {"invertible", gd.invertible}};
}

json gauge_result_to_json(const GaugeOptResult& r) {
  return json{{"b_star", mat4_to_json(r.b_star.b)},
              {"initial_objective", r.initial_objective},
              {"final_objective", r.final_objective},
              {"objective_trace", r.objective_trace},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

json fit_report_to_json(const FitReport& r) {
  return json{{"start_objective", r.start_objective},
              {"final_objective", r.final_objective},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"stop_reason", r.stop_reason},
              {"objective_trace", r.objective_trace},
              {"constraint_residuals",
               {{"tp_row", r.tp_residual},
                {"rho_trace", r.rho_trace_residual},
                {"effect_min_eigenvalue", r.effect_min_eigenvalue}}},
              {"wall_ms", r.wall_ms}};
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open file: " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw IoError("failed to parse " + path + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open file for writing: " + path);
  f << j.dump(2) << "\n";
}

}  // namespace qgst
