// Copyright 2026 The rdp-lab Authors. All Rights Reserved.
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

#ifndef RDP_SVG_H_
#define RDP_SVG_H_

#include <string>
#include <vector>

namespace rdp {

enum class SeriesStyle { kLine, kMarkers };

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_error;  // half-widths of error bars, or empty
  SeriesStyle style = SeriesStyle::kLine;
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<SvgSeries> series;
};

// Standalone SVG document with axes, ticks and a legend. Non-finite points
// (and non-positive ones on a log axis) are skipped. Log axes span at least
// two decades with a labeled tick per decade.
std::string RenderSvg(const SvgPlot& plot);

// Tick positions for a linear axis: multiples of 1, 2 or 5 times a power of
// ten covering [lo, hi].
std::vector<double> LinearTicks(double lo, double hi, int target_count);

}  // namespace rdp

#endif  // RDP_SVG_H_
