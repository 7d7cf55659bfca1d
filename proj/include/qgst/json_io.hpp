// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/channels.hpp"
#include "qgst/gateset.hpp"
#include "qgst/lgst.hpp"
#include "qgst/mle.hpp"
#include "qgst/simulator.hpp"
#include "qgst/sweep.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace qgst {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

// Matrices serialize as row-major arrays, complex numbers as [re, im].
json mat4_to_json(const Mat4& m);
Mat4 mat4_from_json(const json& j);
json vec4_to_json(const Vec4& v);
Vec4 vec4_from_json(const json& j);

json channel_spec_to_json(const ChannelSpec& spec);
ChannelSpec channel_spec_from_json(const json& j);

json error_model_to_json(const ErrorModel& em);
ErrorModel error_model_from_json(const json& j, int n_gates);

json gateset_to_json(const GateSet& gs);
GateSet gateset_from_json(const json& j);

json dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const json& j);

void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);

void save_gateset(const GateSet& gs, const std::string& path);
GateSet load_gateset(const std::string& path);

json gram_diagnostics_to_json(const GramDiagnostics& gd);
json gauge_result_to_json(const GaugeOptResult& r);
json fit_report_to_json(const FitReport& r);

json load_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);

}  // namespace qgst
