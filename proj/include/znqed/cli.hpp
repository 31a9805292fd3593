#pragma once

// Subcommand entry points. Each returns a process exit status:
//   0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
// Errors are reported on stderr.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace znqed {

struct RunOptions {
  std::string config_path;  // optional config file (or a manifest)
  std::string preset;       // optional figure preset name
  std::string out_dir;      // output directory; falls back to
                            // $ZNQED_OUT_ROOT/<deterministic name>
  int workers = 1;          // sweep parallelism
};

int cmd_quench(const RunOptions& opts);
int cmd_string(const RunOptions& opts);
int cmd_sweep(const RunOptions& opts);

struct AnalyzeOptions {
  std::string run_dir;
  std::string series = "rho";     // scalar series to analyze
  bool peaks = false;
  bool period = false;
  double prominence = 1e-3;
  std::optional<std::pair<double, double>> rate_window;
  std::string fit_model;          // lorentzian|gaussian|reciprocal_linear|
                                  // logarithmic; empty = no fit
  std::string fit_x = "m";        // summary.csv x column for sweep fits
                                  // (single-run fits always use time)
  std::string fit_y;              // y column; defaults to `series`
  std::string report = "report.txt";
};

int cmd_analyze(const AnalyzeOptions& opts);

struct PlotOptions {
  std::string run_dir;
  std::vector<std::string> series;    // scalar series -> line plots
  std::vector<std::string> matrices;  // vector series -> heatmaps
  std::string sweep_heatmap;          // summary.csv column -> (m,g) heatmap
};

int cmd_plot(const PlotOptions& opts);

}  // namespace znqed
