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


#include "polreg/harness/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace polreg::harness {
namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return ec == std::errc() ? std::string(buf, end) : "0";
}

std::string label_num(double v) {
  char buf[32];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
  return ec == std::errc() ? std::string(buf, end) : "?";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;
  double from = 0.0;
  double to = 1.0;

  double map(double v) const {
    const double u = log ? std::log10(v) : v;
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    return from + (u - a) / (b - a) * (to - from);
  }
  bool admits(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

void fit(Axis& axis) {
  if (!(axis.lo < axis.hi)) {
    if (axis.lo > axis.hi) {
      axis.lo = axis.log ? 1.0 : 0.0;
      axis.hi = axis.log ? 10.0 : 1.0;
    } else if (axis.log) {
      axis.lo /= 2.0;
      axis.hi *= 2.0;
    } else {
      const double pad = std::max(1.0, std::abs(axis.lo) * 0.1);
      axis.lo -= pad;
      axis.hi += pad;
    }
  } else if (!axis.log) {
    const double pad = (axis.hi - axis.lo) * 0.05;
    axis.lo -= pad;
    axis.hi += pad;
  }
}

std::vector<double> ticks(const Axis& axis) {
  std::vector<double> out;
  if (axis.log) {
    for (double e = std::floor(std::log10(axis.lo));
         e <= std::ceil(std::log10(axis.hi)); e += 1.0) {
      const double v = std::pow(10.0, e);
      if (v >= axis.lo && v <= axis.hi) out.push_back(v);
    }
    if (out.empty()) out = {axis.lo, axis.hi};
  } else {
    for (int i = 0; i <= 4; ++i) {
      out.push_back(axis.lo + (axis.hi - axis.lo) * i / 4.0);
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec,
                       const std::vector<PlotSeries>& series) {
  const double left = 80, right = 20, top = 40, bottom = 50;
  Axis x{spec.log_x, std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), left, spec.width - right};
  Axis y{spec.log_y, std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), spec.height - bottom, top};

  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!x.admits(s.x[i]) || !y.admits(s.y[i])) continue;
      x.lo = std::min(x.lo, s.x[i]);
      x.hi = std::max(x.hi, s.x[i]);
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      const double y_lo = y.admits(s.y[i] - e) ? s.y[i] - e : s.y[i];
      y.lo = std::min(y.lo, y_lo);
      y.hi = std::max(y.hi, s.y[i] + e);
    }
  }
  fit(x);
  fit(y);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(spec.width / 2.0) +
         "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" +
         escape(spec.title) + "</text>\n";

  // Axes and ticks.
  out += "<g stroke=\"black\" fill=\"none\">";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(y.from) + "\" x2=\"" +
         num(x.to) + "\" y2=\"" + num(y.from) + "\"/>";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(y.from) + "\" x2=\"" +
         num(left) + "\" y2=\"" + num(top) + "\"/>";
  out += "</g>\n";
  for (double v : ticks(x)) {
    const double px = x.map(v);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(y.from) + "\" x2=\"" +
           num(px) + "\" y2=\"" + num(y.from + 5) + "\" stroke=\"black\"/>";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(y.from + 18) +
           "\" text-anchor=\"middle\">" + label_num(v) + "</text>\n";
  }
  for (double v : ticks(y)) {
    const double py = y.map(v);
    out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py) + "\" x2=\"" +
           num(left) + "\" y2=\"" + num(py) + "\" stroke=\"black\"/>";
    out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\">" + label_num(v) + "</text>\n";
  }
  out += "<text x=\"" + num((x.from + x.to) / 2) + "\" y=\"" +
         num(spec.height - 10.0) + "\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
  out += "<text transform=\"translate(16," + num((y.from + y.to) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) +
         "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const std::string color = kPalette[si % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!x.admits(s.x[i]) || !y.admits(s.y[i])) continue;
      const double px = x.map(s.x[i]);
      const double py = y.map(s.y[i]);
      if (!points.empty()) points += ' ';
      points += num(px) + ',' + num(py);
      out += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) +
             "\" r=\"3\" fill=\"" + color + "\"/>";
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      if (e > 0.0) {
        const double lo = y.admits(s.y[i] - e) ? s.y[i] - e : s.y[i];
        out += "<line x1=\"" + num(px) + "\" y1=\"" + num(y.map(lo)) +
               "\" x2=\"" + num(px) + "\" y2=\"" + num(y.map(s.y[i] + e)) +
               "\" stroke=\"" + color + "\"/>";
      }
      out += "\n";
    }
    out += "<polyline fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"" +
           (s.dashed ? std::string(" stroke-dasharray=\"6 4\"") : std::string()) +
           " points=\"" + points + "\"/>\n";
    const double ly = top + 14.0 * si;
    out += "<line x1=\"" + num(left + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(left + 30) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\"" +
           (s.dashed ? std::string(" stroke-dasharray=\"6 4\"") : std::string()) +
           "/>";
    out += "<text x=\"" + num(left + 35) + "\" y=\"" + num(ly + 4) + "\">" +
           escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace polreg::harness
