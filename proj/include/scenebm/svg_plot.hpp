// Copyright 2026 The scenebm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCENEBM_SVG_PLOT_HPP
#define SCENEBM_SVG_PLOT_HPP

#include <string>
#include <vector>

#include "scenebm/trainer.hpp"

namespace scenebm {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_plot_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label);

// Training reconstruction error per epoch, series "objects" and "relations".
std::string training_curve_svg(const TrainHistory& history);

}  // namespace scenebm

#endif  // SCENEBM_SVG_PLOT_HPP
