#include "mspcguard/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mspcguard/errors.hpp"

namespace mspcguard {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;  // data ranges
  double px(double x) const {
    return kMarginLeft + (x - x0) / (x1 - x0) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - y0) / (y1 - y0) * (kHeight - kMarginTop - kMarginBottom);
  }
};

void axes(std::string& svg, const Frame& f, const std::string& x_label,
          const std::string& y_label, const std::string& title) {
  svg += "<rect width='" + std::to_string(kWidth) + "' height='" + std::to_string(kHeight) +
         "' fill='white'/>\n";
  svg += "<text x='" + std::to_string(kWidth / 2) + "' y='24' text-anchor='middle' "
         "font-family='sans-serif' font-size='16'>" + title + "</text>\n";
  svg += "<line x1='" + num(f.px(f.x0)) + "' y1='" + num(f.py(f.y0)) + "' x2='" +
         num(f.px(f.x1)) + "' y2='" + num(f.py(f.y0)) + "' stroke='black'/>\n";
  svg += "<line x1='" + num(f.px(f.x0)) + "' y1='" + num(f.py(f.y0)) + "' x2='" +
         num(f.px(f.x0)) + "' y2='" + num(f.py(f.y1)) + "' stroke='black'/>\n";
  svg += "<text x='" + std::to_string(kWidth / 2) + "' y='" + std::to_string(kHeight - 12) +
         "' text-anchor='middle' font-family='sans-serif' font-size='12'>" + x_label +
         "</text>\n";
  svg += "<text x='16' y='" + std::to_string(kHeight / 2) +
         "' text-anchor='middle' font-family='sans-serif' font-size='12' transform='rotate(-90 "
         "16 " + std::to_string(kHeight / 2) + ")'>" + y_label + "</text>\n";
}

void dashed_limit(std::string& svg, const Frame& f, double y, const std::string& label) {
  if (y < f.y0 || y > f.y1) return;
  svg += "<line x1='" + num(f.px(f.x0)) + "' y1='" + num(f.py(y)) + "' x2='" +
         num(f.px(f.x1)) + "' y2='" + num(f.py(y)) +
         "' stroke='red' stroke-dasharray='6,4'/>\n";
  svg += "<text x='" + num(f.px(f.x1) - 4) + "' y='" + num(f.py(y) - 4) +
         "' text-anchor='end' font-family='sans-serif' font-size='11' fill='red'>" + label +
         "</text>\n";
}

}  // namespace

std::string control_chart_svg(std::span<const StatPoint> stats, bool use_d,
                              const ControlLimits& limits, const std::string& title) {
  if (stats.empty()) throw InputFault("no statistics to chart");
  const double lim95 = use_d ? limits.d_95 : limits.q_95;
  const double lim99 = use_d ? limits.d_99 : limits.q_99;

  std::vector<double> values;
  values.reserve(stats.size());
  for (const auto& s : stats) values.push_back(use_d ? s.d : s.q);

  // Cap the y-range so the in-control band stays readable when the statistic
  // explodes after an anomaly.
  double vmax = *std::max_element(values.begin(), values.end());
  vmax = std::min(vmax, 5.0 * lim99);
  vmax = std::max(vmax, 1.2 * lim99);

  Frame f{stats.front().t / 3600.0, stats.back().t / 3600.0, 0.0, vmax * 1.05};

  std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" +
                    std::to_string(kWidth) + "' height='" + std::to_string(kHeight) + "'>\n";
  axes(svg, f, "time [h]", use_d ? "D statistic" : "Q statistic", title);

  // Per-bucket min/max decimation keeps spikes without emitting every sample.
  const std::size_t buckets = 1600;
  const std::size_t stride = std::max<std::size_t>(1, stats.size() / buckets);
  std::string points;
  for (std::size_t i = 0; i < stats.size(); i += stride) {
    const std::size_t end = std::min(i + stride, stats.size());
    std::size_t imin = i, imax = i;
    for (std::size_t k = i; k < end; ++k) {
      if (values[k] < values[imin]) imin = k;
      if (values[k] > values[imax]) imax = k;
    }
    for (std::size_t k : {std::min(imin, imax), std::max(imin, imax)}) {
      const double y = std::min(values[k], f.y1);
      points += num(f.px(stats[k].t / 3600.0)) + "," + num(f.py(y)) + " ";
      if (imin == imax) break;
    }
  }
  svg += "<polyline fill='none' stroke='steelblue' stroke-width='1' points='" + points +
         "'/>\n";
  dashed_limit(svg, f, lim95, "95%");
  dashed_limit(svg, f, lim99, "99%");
  svg += "</svg>\n";
  return svg;
}

std::string bar_chart_svg(const std::vector<std::string>& names,
                          std::span<const double> values, const std::string& title) {
  if (names.size() != values.size() || names.empty()) {
    throw InputFault("bar chart needs matching, nonempty names and values");
  }
  double vmax = 1e-12;
  for (double v : values) vmax = std::max(vmax, std::abs(v));

  Frame f{0.0, static_cast<double>(names.size()), -vmax * 1.1, vmax * 1.1};
  std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" +
                    std::to_string(kWidth) + "' height='" + std::to_string(kHeight) + "'>\n";
  axes(svg, f, "", "contribution", title);
  svg += "<line x1='" + num(f.px(f.x0)) + "' y1='" + num(f.py(0.0)) + "' x2='" +
         num(f.px(f.x1)) + "' y2='" + num(f.py(0.0)) + "' stroke='black' stroke-width='0.5'/>\n";

  const double slot = (f.px(1.0) - f.px(0.0));
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double v = values[i];
    const double x = f.px(static_cast<double>(i)) + slot * 0.15;
    const double w = slot * 0.7;
    const double y_top = f.py(std::max(v, 0.0));
    const double h = std::abs(f.py(v) - f.py(0.0));
    svg += "<rect x='" + num(x) + "' y='" + num(y_top) + "' width='" + num(w) +
           "' height='" + num(h) + "' fill='" + (v >= 0.0 ? "steelblue" : "indianred") +
           "'/>\n";
    svg += "<text x='" + num(x + w / 2) + "' y='" + std::to_string(kHeight - kMarginBottom + 16) +
           "' text-anchor='middle' font-family='sans-serif' font-size='11'>" + names[i] +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputFault("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw InputFault("write failed: " + path.string());
}

}  // namespace mspcguard
