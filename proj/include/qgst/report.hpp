// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#pragma once

#include "qgst/gateset.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qgst {

/// Aligned side-by-side numeric tables, one block per gate label.
/// columns holds (column title, gate set) pairs sharing the same labels.
std::string format_ptm_tables(
    const std::vector<std::pair<std::string, const GateSet*>>& columns);

/// Flat SVG grid of PTM entries, one row of 4x4 cell blocks per column.
void write_ptm_svg(const std::string& path,
                   const std::vector<std::pair<std::string, const GateSet*>>& columns);

}  // namespace qgst
