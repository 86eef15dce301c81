// Copyright 2026 The noisytomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noisytomo/svg.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace noisytomo {

namespace {

std::string fmt(double v, int precision = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Piecewise-linear viridis.
std::string color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84},
                                                               {59, 82, 139},
                                                               {33, 145, 140},
                                                               {94, 201, 98},
                                                               {253, 231, 37}}};
  if (std::isnan(t)) return "#888888";
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

}  // namespace

std::string bloch_map_svg(const BlochMap& map) {
  constexpr double kLeft = 60, kTop = 40, kWidth = 600, kHeight = 300, kBar = 20;
  const double pi = std::numbers::pi;
  const double lo = map.min.loss;
  const double hi = map.max.loss;
  const double span = hi > lo ? hi - lo : 1.0;

  // Recover grid spacing from the sample layout.
  int theta_rows = 0;
  int phi_cols = 1;
  {
    double last = -1.0;
    int run = 0;
    for (const auto& p : map.grid) {
      if (p.theta != last) {
        ++theta_rows;
        last = p.theta;
        run = 0;
      }
      phi_cols = std::max(phi_cols, ++run);
    }
  }
  const double cell_w = kWidth / phi_cols;
  const double cell_h = kHeight / std::max(1, theta_rows - 1);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kWidth + 100
      << "\" height=\"" << kTop + kHeight + 60 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"" << kLeft << "\" y=\"20\">L on the Bloch sphere: " << escape(map.protocol_label)
      << (map.channel_label.empty() ? "" : ", " + escape(map.channel_label)) << "  (min "
      << fmt(map.min.loss) << ", max " << fmt(map.max.loss) << ")</text>\n";
  for (const auto& p : map.grid) {
    const bool pole = p.theta == 0.0 || std::abs(p.theta - pi) < 1e-12;
    const double x = pole ? kLeft : kLeft + p.phi / (2 * pi) * kWidth;
    const double w = pole ? kWidth : cell_w;
    const double y = kTop + p.theta / pi * kHeight - cell_h / 2;
    const double ty = std::max(kTop, y);
    const double h = std::min(kTop + kHeight, y + cell_h) - ty;
    const double t = std::isnan(p.loss) ? std::numeric_limits<double>::quiet_NaN() : (p.loss - lo) / span;
    out << "<rect x=\"" << fmt(x, 6) << "\" y=\"" << fmt(ty, 6) << "\" width=\"" << fmt(w + 0.5, 6)
        << "\" height=\"" << fmt(h + 0.5, 6) << "\" fill=\"" << color(t) << "\"/>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft + kWidth / 2 << "\" y=\"" << kTop + kHeight + 35
      << "\" text-anchor=\"middle\">phi (0 to 2 pi)</text>\n";
  out << "<text x=\"15\" y=\"" << kTop + kHeight / 2 << "\" transform=\"rotate(-90 15 "
      << kTop + kHeight / 2 << ")\" text-anchor=\"middle\">theta (0 to pi)</text>\n";
  const double bar_x = kLeft + kWidth + 20;
  for (int i = 0; i < 50; ++i) {
    const double t = 1.0 - i / 49.0;
    out << "<rect x=\"" << bar_x << "\" y=\"" << fmt(kTop + i * kHeight / 50, 6) << "\" width=\""
        << kBar << "\" height=\"" << fmt(kHeight / 50 + 0.5, 6) << "\" fill=\"" << color(t) << "\"/>\n";
  }
  out << "<text x=\"" << bar_x + kBar + 4 << "\" y=\"" << kTop + 10 << "\">" << fmt(hi) << "</text>\n";
  out << "<text x=\"" << bar_x + kBar + 4 << "\" y=\"" << kTop + kHeight << "\">" << fmt(lo)
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string loss_histogram_svg(const Histogram& empirical, const Histogram& theory,
                               const std::string& title) {
  constexpr double kLeft = 70, kTop = 40, kWidth = 600, kHeight = 300;
  double peak = 0.0;
  for (double d : empirical.density) peak = std::max(peak, d);
  for (double d : theory.density) peak = std::max(peak, d);
  if (!(peak > 0.0)) peak = 1.0;
  const double bins = static_cast<double>(empirical.density.size());
  const double bar_w = kWidth / bins;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kWidth + 30
      << "\" height=\"" << kTop + kHeight + 60 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"" << kLeft << "\" y=\"20\">" << escape(title) << "</text>\n";
  for (std::size_t i = 0; i < empirical.density.size(); ++i) {
    const double h = empirical.density[i] / peak * kHeight;
    out << "<rect x=\"" << fmt(kLeft + i * bar_w, 6) << "\" y=\"" << fmt(kTop + kHeight - h, 6)
        << "\" width=\"" << fmt(bar_w, 6) << "\" height=\"" << fmt(h, 6)
        << "\" fill=\"#6b8fd6\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#1a9641\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < theory.density.size(); ++i) {
    const double x = kLeft + (i + 0.5) * kWidth / static_cast<double>(theory.density.size());
    const double y = kTop + kHeight - theory.density[i] / peak * kHeight;
    out << fmt(x, 6) << ',' << fmt(y, 6) << ' ';
  }
  out << "\"/>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + kHeight + 18 << "\">" << fmt(empirical.lo)
      << "</text>\n";
  out << "<text x=\"" << kLeft + kWidth << "\" y=\"" << kTop + kHeight + 18
      << "\" text-anchor=\"end\">" << fmt(empirical.hi) << "</text>\n";
  out << "<text x=\"" << kLeft + kWidth / 2 << "\" y=\"" << kTop + kHeight + 40
      << "\" text-anchor=\"middle\">1 - F</text>\n";
  out << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">" << fmt(peak)
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace noisytomo
