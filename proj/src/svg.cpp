#include "znqed/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace znqed {

namespace {

constexpr double kWidth = 880.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

Range find_range(const std::vector<const std::vector<double>*>& sets) {
  Range r{std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (const auto* set : sets)
    for (double v : *set) r.expand(v);
  if (!(r.lo <= r.hi)) r = {0.0, 1.0};
  if (r.lo == r.hi) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

// Round tick spacing to 1/2/5 decades.
std::vector<double> ticks(const Range& r, int target = 5) {
  const double span = r.hi - r.lo;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  double t = std::ceil(r.lo / step) * step;
  for (; t <= r.hi + 1e-9 * span; t += step) {
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return out;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header() {
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" "
                "height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                kWidth, kHeight, kWidth, kHeight);
  std::string out = buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

std::string frame_and_axes(const std::string& title, const std::string& xlab,
                           const std::string& ylab, const Range& xr,
                           const Range& yr, double plot_w, double plot_h) {
  std::string out;
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"24\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + escape(title) + "</text>\n";
  out += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" +
         num(kHeight - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" + escape(xlab) + "</text>\n";
  out += "<text x=\"18\" y=\"" + num(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " +
         num(kTop + plot_h / 2) + ")\">" + escape(ylab) + "</text>\n";

  for (double t : ticks(xr)) {
    const double px = kLeft + (t - xr.lo) / (xr.hi - xr.lo) * plot_w;
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(kTop + plot_h) +
           "\" x2=\"" + num(px) + "\" y2=\"" + num(kTop + plot_h + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(kTop + plot_h + 19) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(t) + "</text>\n";
  }
  for (double t : ticks(yr)) {
    const double py = kTop + plot_h - (t - yr.lo) / (yr.hi - yr.lo) * plot_h;
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py) +
           "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(py) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(t) + "</text>\n";
  }
  return out;
}

// Five-stop dark-to-light colormap.
void colormap(double t, int& r, int& g, int& b) {
  static const int stops[][3] = {{68, 1, 84},
                                 {59, 82, 139},
                                 {33, 145, 140},
                                 {94, 201, 98},
                                 {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * 4.0;
  const int i = std::min(3, static_cast<int>(pos));
  const double f = pos - i;
  r = static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])));
  g = static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])));
  b = static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
}

std::string color_hex(double t) {
  int r, g, b;
  colormap(t, r, g, b);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series) {
  if (series.empty())
    throw std::invalid_argument("line plot needs at least one series");
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::vector<const std::vector<double>*> all_x, all_y;
  for (const auto& s : series) {
    if (s.xs.size() != s.ys.size())
      throw std::invalid_argument("plot series misaligned");
    all_x.push_back(&s.xs);
    all_y.push_back(&s.ys);
  }
  const Range xr = find_range(all_x);
  const Range yr = find_range(all_y);

  std::string out = header();
  out += frame_and_axes(title, x_label, y_label, xr, yr, plot_w, plot_h);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    if (s.xs.empty()) continue;
    std::string points;
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      const double px = kLeft + (s.xs[i] - xr.lo) / (xr.hi - xr.lo) * plot_w;
      const double py =
          kTop + plot_h - (s.ys[i] - yr.lo) / (yr.hi - yr.lo) * plot_h;
      points += num(px) + "," + num(py) + " ";
    }
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
    out += "<polyline points=\"" + points +
           "\" fill=\"none\" stroke-width=\"1.5\" stroke=\"" + color +
           "\"/>\n";
    const double ly = kTop + 16.0 + 16.0 * static_cast<double>(k);
    out += "<line x1=\"" + num(kLeft + plot_w - 120) + "\" y1=\"" + num(ly) +
           "\" x2=\"" + num(kLeft + plot_w - 100) + "\" y2=\"" + num(ly) +
           "\" stroke-width=\"1.5\" stroke=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(kLeft + plot_w - 94) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_heatmap(const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::vector<std::vector<double>>& values) {
  if (values.size() != ys.size())
    throw std::invalid_argument("heatmap rows misaligned with y coordinates");
  for (const auto& row : values)
    if (row.size() != xs.size())
      throw std::invalid_argument("heatmap row width misaligned");
  if (xs.empty() || ys.empty())
    throw std::invalid_argument("heatmap needs data");

  const double bar_w = 46.0;
  const double plot_w = kWidth - kLeft - kRight - bar_w;
  const double plot_h = kHeight - kTop - kBottom;

  Range vr{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  for (const auto& row : values)
    for (double v : row) vr.expand(v);
  if (!(vr.lo <= vr.hi)) vr = {0.0, 1.0};
  if (vr.lo == vr.hi) vr.hi = vr.lo + 1.0;

  const Range xr = find_range({&xs});
  const Range yr = find_range({&ys});

  std::string out = header();
  const double cw = plot_w / static_cast<double>(xs.size());
  const double ch = plot_h / static_cast<double>(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double t = (values[i][j] - vr.lo) / (vr.hi - vr.lo);
      const double px = kLeft + cw * static_cast<double>(j);
      const double py = kTop + plot_h - ch * static_cast<double>(i + 1);
      out += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" +
             num(cw + 0.5) + "\" height=\"" + num(ch + 0.5) + "\" fill=\"" +
             color_hex(t) + "\"/>\n";
    }
  }
  out += frame_and_axes(title, x_label, y_label, xr, yr, plot_w, plot_h);

  // Color bar with min/max labels.
  const double bx = kLeft + plot_w + 12.0;
  constexpr int kBarSteps = 64;
  for (int i = 0; i < kBarSteps; ++i) {
    const double t = (i + 0.5) / kBarSteps;
    const double py = kTop + plot_h * (1.0 - (i + 1.0) / kBarSteps);
    out += "<rect x=\"" + num(bx) + "\" y=\"" + num(py) + "\" width=\"14\" "
           "height=\"" + num(plot_h / kBarSteps + 0.5) + "\" fill=\"" +
           color_hex(t) + "\"/>\n";
  }
  out += "<text x=\"" + num(bx + 18) + "\" y=\"" + num(kTop + plot_h) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + num(vr.lo) +
         "</text>\n";
  out += "<text x=\"" + num(bx + 18) + "\" y=\"" + num(kTop + 10) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + num(vr.hi) +
         "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace znqed
