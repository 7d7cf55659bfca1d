// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

#include "qgst/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qgst {

std::string format_ptm_tables(
    const std::vector<std::pair<std::string, const GateSet*>>& columns) {
  if (columns.empty()) return "";
  const GateSet& first = *columns.front().second;
  std::ostringstream out;
  char buf[64];

  for (int k = 0; k < first.num_gates(); ++k) {
    const std::string label =
        k < static_cast<int>(first.labels.size()) ? first.labels[k]
                                                  : "G" + std::to_string(k);
    out << label << "\n";
    for (const auto& [title, gs] : columns) {
      std::snprintf(buf, sizeof buf, "  %-33s", title.c_str());
      out << buf;
    }
    out << "\n";
    for (int r = 0; r < 4; ++r) {
      for (const auto& [title, gs] : columns) {
        out << "  ";
        for (int c = 0; c < 4; ++c) {
          std::snprintf(buf, sizeof buf, "%+8.4f ", gs->gates[k].m(r, c));
          out << buf;
        }
      }
      out << "\n";
    }
    out << "\n";
  }
  return out.str();
}

namespace {

// Diverging fill: red for negative entries, blue for positive.
std::string cell_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  const double t = std::abs(v);
  const int fade = static_cast<int>(255.0 * (1.0 - t));
  char buf[16];
  if (v >= 0) {
    std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
  } else {
    std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
  }
  return buf;
}

}  // namespace

void write_ptm_svg(
    const std::string& path,
    const std::vector<std::pair<std::string, const GateSet*>>& columns) {
  if (columns.empty()) throw std::invalid_argument("nothing to render");
  const GateSet& first = *columns.front().second;
  const int n_gates = first.num_gates();
  const int cell = 22, block = 4 * cell, pad = 26, title_h = 22;
  const int width = pad + static_cast<int>(columns.size()) * (block + pad);
  const int height = title_h + n_gates * (block + pad);

  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open SVG output path: " + path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
    << "' height='" << height << "' font-family='monospace' font-size='11'>\n";
  for (std::size_t col = 0; col < columns.size(); ++col) {
    const int x0 = pad + static_cast<int>(col) * (block + pad);
    f << "<text x='" << x0 << "' y='14'>" << columns[col].first << "</text>\n";
    for (int k = 0; k < n_gates; ++k) {
      const int y0 = title_h + k * (block + pad);
      const std::string label =
          k < static_cast<int>(first.labels.size()) ? first.labels[k]
                                                    : "G" + std::to_string(k);
      if (col == 0) {
        f << "<text x='2' y='" << y0 + block / 2 << "' font-size='10'>" << label
          << "</text>\n";
      }
      const Mat4& m = columns[col].second->gates[k].m;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          f << "<rect x='" << x0 + c * cell << "' y='" << y0 + r * cell
            << "' width='" << cell << "' height='" << cell << "' fill='"
            << cell_color(m(r, c)) << "' stroke='#999'/>\n";
        }
      }
    }
  }
  f << "</svg>\n";
}

}  // namespace qgst
