#pragma once

// Dependency-free SVG rendering of line plots and heatmaps. Output is a
// pure function of the inputs (fixed canvas, palette and number
// formatting), so identical data produces byte-identical files.

#include <string>
#include <vector>

namespace znqed {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series);

// values[i][j] is the cell at row coordinate ys[i], column coordinate
// xs[j]; rows render bottom-up (increasing y).
std::string render_heatmap(const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::vector<std::vector<double>>& values);

}  // namespace znqed
