// Copyright 2026 The polreg Authors.
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

namespace polreg::harness {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  // Symmetric error bars; empty for none.
  std::vector<double> err;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

// Minimal line-plot emitter. Log axes silently drop non-positive points.
std::string render_svg(const PlotSpec& spec,
                       const std::vector<PlotSeries>& series);

}  // namespace polreg::harness
