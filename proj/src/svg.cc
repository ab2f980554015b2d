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

#include "rdp/svg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rdp/common.h"

namespace rdp {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string TickLabel(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.6g}", v);
}

struct Axis {
  bool log = false;
  double lo = 0.0;  // in transformed units
  double hi = 1.0;
  std::vector<double> ticks;  // in data units
  std::vector<double> minor;

  double Transform(double v) const { return log ? std::log10(v) : v; }
  bool Usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis MakeAxis(std::vector<double> values, bool log) {
  Axis axis;
  axis.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!axis.Usable(v)) continue;
    lo = std::min(lo, axis.Transform(v));
    hi = std::max(hi, axis.Transform(v));
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi - lo < 2.0) lo = hi - 2.0;
    axis.lo = lo;
    axis.hi = hi;
    for (double d = lo; d <= hi + 0.5; d += 1.0) {
      axis.ticks.push_back(std::pow(10.0, d));
      if (d < hi) {
        for (int k = 2; k <= 9; ++k) axis.minor.push_back(k * std::pow(10.0, d));
      }
    }
    return axis;
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  axis.ticks = LinearTicks(lo, hi, 6);
  axis.lo = std::min(lo, axis.ticks.front());
  axis.hi = std::max(hi, axis.ticks.back());
  return axis;
}

}  // namespace

std::vector<double> LinearTicks(double lo, double hi, int target_count) {
  if (!(hi > lo) || target_count < 1) throw ValidationError("tick range must be nonempty");
  const double raw = (hi - lo) / target_count;
  const double base = std::pow(10.0, std::floor(std::log10(raw)));
  double step = base;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * base;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  const double first = std::floor(lo / step + 1e-9) * step;
  for (double t = first; t <= hi + step * (1.0 - 1e-9); t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    if (t >= hi) break;
  }
  return ticks;
}

std::string RenderSvg(const SvgPlot& plot) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size() || (!s.y_error.empty() && s.y_error.size() != s.y.size())) {
      throw ValidationError(fmt::format("series '{}' has mismatched lengths", s.label));
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xs.push_back(s.x[i]);
      ys.push_back(s.y[i]);
      if (!s.y_error.empty() && std::isfinite(s.y[i])) {
        ys.push_back(s.y[i] - s.y_error[i]);
        ys.push_back(s.y[i] + s.y_error[i]);
      }
    }
  }
  const Axis ax = MakeAxis(xs, plot.log_x);
  const Axis ay = MakeAxis(ys, plot.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (ax.Transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (ay.Transform(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      kWidth, kHeight);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + pw / 2, Escape(plot.title));
  svg += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, pw, ph);
  for (double t : ax.ticks) {
    const double x = px(t);
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
        x, kTop, kTop + ph, kTop + ph + 18, TickLabel(t));
  }
  for (double t : ax.minor) {
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                       px(t), kTop + ph, kTop + ph - 4);
  }
  for (double t : ay.ticks) {
    const double y = py(t);
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
        kLeft, y, kLeft + pw, kLeft - 6, y + 4, TickLabel(t));
  }
  for (double t : ay.minor) {
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
                       kLeft, py(t), kLeft + 4);
  }
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + pw / 2, kHeight - 16, Escape(plot.x_label));
  svg += fmt::format(
      "<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
      kTop + ph / 2, Escape(plot.y_label));

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!ax.Usable(s.x[i]) || !ay.Usable(s.y[i])) continue;
      const double x = px(s.x[i]);
      const double y = py(s.y[i]);
      if (s.style == SeriesStyle::kLine) {
        path += fmt::format("{}{:.2f},{:.2f}", path.empty() ? "M" : " L", x, y);
      } else {
        svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", x, y, color);
      }
      if (!s.y_error.empty() && s.y_error[i] > 0.0) {
        const double lo = s.y[i] - s.y_error[i];
        const double hi = s.y[i] + s.y_error[i];
        if (ay.Usable(lo) && ay.Usable(hi)) {
          svg += fmt::format(
              "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n",
              x, py(lo), py(hi), color);
        }
      }
    }
    if (!path.empty()) {
      svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                         path, color);
    }
    const double ly = kTop + 12 + 20.0 * static_cast<double>(si);
    const double lx = kLeft + pw + 14;
    if (s.style == SeriesStyle::kLine) {
      svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                         lx, ly, lx + 20, ly, color);
    } else {
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", lx + 10, ly, color);
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 26, ly + 4, Escape(s.label));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace rdp
