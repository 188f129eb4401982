// Copyright 2026 The Kinolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "evaluation.hpp"
#include "metrics.hpp"

namespace kinolab::plots {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range span(const std::vector<Series>& series, bool y_axis) {
  Range r{1e300, -1e300};
  for (const auto& s : series) {
    const auto& v = y_axis ? s.y : s.x;
    for (double value : v) {
      r.lo = std::min(r.lo, value);
      r.hi = std::max(r.hi, value);
    }
  }
  if (r.lo > r.hi) return {0.0, 1.0};
  if (r.hi - r.lo < 1e-12) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  const double pad = 0.05 * (r.hi - r.lo);
  return {r.lo - pad, r.hi + pad};
}

std::string fmt_tick(double v) {
  // Short deterministic tick labels.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series, int width,
                              int height) {
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  const Range xr = span(series, false);
  const Range yr = span(series, true);

  auto sx = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes, ticks, grid.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const int ticks = 6;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
    svg << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt << "\" x2=\"" << sx(fx)
        << "\" y2=\"" << mt + ph << "\" stroke=\"#eee\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << sy(fy) << "\" stroke=\"#eee\"/>\n";
    svg << "<text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\" points=\"";
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      svg << format_double(sx(series[s].x[i])) << ','
          << format_double(sy(series[s].y[i])) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 16 + 16 * s
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\""
        << color << "\">" << series[s].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  write_file_atomic(path, render_line_chart(title, x_label, y_label, series));
}

void write_velocity_tracking(const std::string& path,
                             const evaluation::EvaluationReport& report) {
  Series achieved{"achieved", {}, {}};
  Series ideal{"commanded", {}, {}};
  for (const auto& row : report.rows) {
    achieved.x.push_back(row.commanded);
    achieved.y.push_back(row.mean_velocity);
    ideal.x.push_back(row.commanded);
    ideal.y.push_back(row.commanded);
  }
  write_line_chart(path, "Velocity tracking", "commanded velocity [m/s]",
                   "mean achieved velocity [m/s]", {achieved, ideal});
}

void write_momentum_decomposition(const std::string& path,
                                  const evaluation::EvaluationReport& report) {
  std::vector<Series> series;
  Series total{"|L_z| total", {}, {}};
  for (const auto& row : report.rows) {
    total.x.push_back(row.commanded);
    total.y.push_back(row.mean_abs_yaw_momentum);
  }
  series.push_back(total);
  for (int g = 0; g < kinodyn::kNumGroups; ++g) {
    Series s{kinodyn::group_name(static_cast<kinodyn::LinkGroup>(g)), {}, {}};
    for (const auto& row : report.rows) {
      s.x.push_back(row.commanded);
      s.y.push_back(row.mean_group_momentum[g]);
    }
    series.push_back(s);
  }
  write_line_chart(path, "Angular momentum decomposition",
                   "commanded velocity [m/s]", "mean |L| [kg m^2/s]", series);
}

}  // namespace kinolab::plots
