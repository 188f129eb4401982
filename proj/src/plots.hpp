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

#pragma once

#include <string>
#include <vector>

namespace kinolab::evaluation {
struct EvaluationReport;
}

namespace kinolab::plots {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line chart; byte-identical output for identical inputs.
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series,
                              int width = 900, int height = 540);

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

void write_velocity_tracking(const std::string& path,
                             const evaluation::EvaluationReport& report);
void write_momentum_decomposition(const std::string& path,
                                  const evaluation::EvaluationReport& report);

}  // namespace kinolab::plots
