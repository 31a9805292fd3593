#include "znqed/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <set>

#include "znqed/analysis.hpp"
#include "znqed/csv.hpp"
#include "znqed/runio.hpp"
#include "znqed/svg.hpp"

namespace znqed {

namespace fs = std::filesystem;

namespace {

int report_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return 1;
  if (dynamic_cast<const NumericalError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  return 2;
}

std::string slug_double(double v) {
  std::string s = format_double(v);
  for (char& c : s)
    if (c == '.' || c == '+') c = '_';
  return s;
}

fs::path resolve_out_dir(const RunOptions& opts, RunMode mode,
                         const QuenchSpec& spec) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  const char* root = std::getenv(kOutRootEnv);
  if (!root || !*root)
    throw ConfigError("no --out given and " + std::string(kOutRootEnv) +
                      " is unset");
  std::string name = to_string(mode) + "_n" + std::to_string(spec.params.n) +
                     "_N" + std::to_string(spec.params.sites) + "_m" +
                     slug_double(spec.params.m) + "_g" +
                     slug_double(spec.params.g);
  return fs::path(root) / name;
}

// Preset (if named) overlaid with the config file (file wins), checked
// for stray keys after the spec is built.
ConfigMap gather_config(const RunOptions& opts, RunMode mode) {
  ConfigMap cfg;
  if (!opts.preset.empty()) cfg = preset_config(opts.preset);
  if (!opts.config_path.empty()) {
    ConfigMap file_cfg = ConfigMap::from_file(opts.config_path);
    const std::string file_mode = file_cfg.get_string("meta.mode", "");
    if (!file_mode.empty() && file_mode != to_string(mode))
      throw ConfigError(opts.config_path + ": manifest records mode '" +
                        file_mode + "', not '" + to_string(mode) + "'");
    cfg = merge_configs(cfg, file_cfg);
  }
  return cfg;
}

int run_single(const RunOptions& opts, RunMode mode) {
  try {
    ConfigMap cfg = gather_config(opts, mode);
    QuenchSpec spec = spec_from_config(cfg, mode);
    cfg.require_all_consumed();
    const fs::path dir = resolve_out_dir(opts, mode, spec);
    if (mode == RunMode::string) {
      StringRunResult result = run_string(spec);
      write_string_run(dir, result);
    } else {
      TimeSeriesBundle bundle = run_vacuum_quench(spec);
      write_quench_run(dir, bundle);
    }
    std::cout << dir.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

}  // namespace

int cmd_quench(const RunOptions& opts) {
  return run_single(opts, RunMode::quench);
}

int cmd_string(const RunOptions& opts) {
  return run_single(opts, RunMode::string);
}

int cmd_sweep(const RunOptions& opts) {
  try {
    ConfigMap cfg = gather_config(opts, RunMode::sweep);
    if (!cfg.has("sweep.m_values") && !cfg.has("sweep.g_values"))
      throw ConfigError("sweep needs sweep.m_values and/or sweep.g_values");
    ConfigMap manifest_cfg = cfg;  // echo of the grid definition
    std::vector<QuenchSpec> grid = grid_from_config(cfg);
    cfg.require_all_consumed();
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    const fs::path dir = resolve_out_dir(opts, RunMode::sweep, grid.front());
    const std::vector<SweepCell> cells = run_sweep(grid, opts.workers);
    write_sweep_run(dir, grid, cells, manifest_cfg);
    std::cout << dir.string() << "\n";
    for (const auto& cell : cells)
      if (!cell.ok)
        std::cerr << "cell " << cell.index << " failed: " << cell.error
                  << "\n";
    return 0;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

int cmd_analyze(const AnalyzeOptions& opts) {
  try {
    LoadedRun run = load_run(opts.run_dir);
    std::string report;

    const bool is_sweep = run.manifest.get_string("meta.mode", "") == "sweep";

    if (!opts.fit_model.empty() && is_sweep) {
      // Fit a summary column against another across the sweep cells.
      const CsvTable summary = read_csv(run.dir / "summary.csv");
      const std::string ycol =
          opts.fit_y.empty() ? opts.series : opts.fit_y;
      std::vector<double> xs_all = summary.column(opts.fit_x);
      std::vector<double> ys_all = summary.column(ycol);
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < xs_all.size(); ++i)
        if (std::isfinite(xs_all[i]) && std::isfinite(ys_all[i])) {
          xs.push_back(xs_all[i]);
          ys.push_back(ys_all[i]);
        }
      const FitModel model = fit_model_from_string(opts.fit_model);
      const FitResult fit =
          curve_fit(model, xs, ys, default_fit_init(model, xs, ys));
      report += "fit.model = " + fit.model_name + "\n";
      report += "fit.x = " + opts.fit_x + "\n";
      report += "fit.y = " + ycol + "\n";
      for (std::size_t j = 0; j < fit.parameters.size(); ++j)
        report += "fit.p" + std::to_string(j) + " = " +
                  format_double(fit.parameters[j]) + " +- " +
                  format_double(fit.std_errors[j]) + "\n";
      report += "fit.rss = " + format_double(fit.rss) + "\n";
      report += "fit.converged = " + std::string(fit.converged ? "true" : "false") + "\n";
      report += "fit.iterations = " + std::to_string(fit.iterations) + "\n";
    } else {
      const CsvTable table = read_csv(series_path(run, opts.series));
      const std::vector<double> ts = table.column("time");
      const std::vector<double> ys = table.column(opts.series);

      if (opts.peaks) {
        const auto peaks = find_peaks(ts, ys, opts.prominence);
        report += "peaks.count = " + std::to_string(peaks.size()) + "\n";
        for (std::size_t i = 0; i < peaks.size(); ++i) {
          report += "peaks." + std::to_string(i) + ".t = " +
                    format_double(peaks[i].t_peak) + "\n";
          report += "peaks." + std::to_string(i) + ".value = " +
                    format_double(peaks[i].value) + "\n";
          report += "peaks." + std::to_string(i) + ".index = " +
                    std::to_string(peaks[i].index) + "\n";
        }
      }
      if (opts.period) {
        const double T = oscillation_period(ts, ys, opts.prominence);
        report += "period = " + format_double(T) + "\n";
      }
      if (opts.rate_window) {
        const FitResult fit = rate_from_series(
            ts, ys, opts.rate_window->first, opts.rate_window->second);
        report += "rate.slope = " + format_double(fit.parameters[0]) +
                  " +- " + format_double(fit.std_errors[0]) + "\n";
        report += "rate.intercept = " + format_double(fit.parameters[1]) + "\n";
        report += "rate.window = [" + format_double(opts.rate_window->first) +
                  ", " + format_double(opts.rate_window->second) + "]\n";
      }
      if (!opts.fit_model.empty()) {
        const FitModel model = fit_model_from_string(opts.fit_model);
        // Fits against time skip t = 0 for the logarithmic model.
        std::vector<double> xs, ys2;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          if (model == FitModel::logarithmic && !(ts[i] > 0.0)) continue;
          xs.push_back(ts[i]);
          ys2.push_back(ys[i]);
        }
        const FitResult fit =
            curve_fit(model, xs, ys2, default_fit_init(model, xs, ys2));
        report += "fit.model = " + fit.model_name + "\n";
        for (std::size_t j = 0; j < fit.parameters.size(); ++j)
          report += "fit.p" + std::to_string(j) + " = " +
                    format_double(fit.parameters[j]) + " +- " +
                    format_double(fit.std_errors[j]) + "\n";
        report += "fit.rss = " + format_double(fit.rss) + "\n";
      }
    }
    if (report.empty())
      throw ConfigError("analyze: nothing requested (use --peaks, --period, "
                        "--rate or --fit)");

    fs::create_directories(fs::path(opts.run_dir) / "analysis");
    const fs::path out = fs::path(opts.run_dir) / "analysis" / opts.report;
    write_text_file(out, report);
    std::cout << out.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

int cmd_plot(const PlotOptions& opts) {
  try {
    const LoadedRun run = load_run(opts.run_dir);
    const fs::path plot_dir = fs::path(opts.run_dir) / "plots";
    fs::create_directories(plot_dir);
    std::vector<std::string> written;

    for (const auto& name : opts.series) {
      const CsvTable table = read_csv(series_path(run, name));
      PlotSeries s{name, table.column("time"), table.column(name)};
      const std::string svg = render_line_plot(name, "time", name, {s});
      const fs::path out = plot_dir / (name + ".svg");
      write_text_file(out, svg);
      written.push_back(out.string());
    }
    for (const auto& name : opts.matrices) {
      const CsvTable table = read_csv(series_path(run, name));
      const std::vector<double> ts = table.column("time");
      std::vector<double> xs;
      std::vector<std::vector<double>> values(ts.size());
      for (std::size_t j = 1; j < table.columns.size(); ++j)
        xs.push_back(static_cast<double>(j));
      for (std::size_t i = 0; i < table.rows.size(); ++i)
        values[i].assign(table.rows[i].begin() + 1, table.rows[i].end());
      const std::string label =
          table.columns.size() > 1 && table.columns[1][0] == 'x' ? "site"
                                                                 : "link";
      const std::string svg =
          render_heatmap(name, label, "time", xs, ts, values);
      const fs::path out = plot_dir / (name + ".svg");
      write_text_file(out, svg);
      written.push_back(out.string());
    }
    if (!opts.sweep_heatmap.empty()) {
      const CsvTable summary = read_csv(run.dir / "summary.csv");
      const std::vector<double> ms = summary.column("m");
      const std::vector<double> gs = summary.column("g");
      const std::vector<double> vs = summary.column(opts.sweep_heatmap);
      std::set<double> m_axis(ms.begin(), ms.end());
      std::set<double> g_axis(gs.begin(), gs.end());
      std::vector<double> xs(m_axis.begin(), m_axis.end());
      std::vector<double> ys(g_axis.begin(), g_axis.end());
      std::vector<std::vector<double>> values(
          ys.size(), std::vector<double>(xs.size(), std::nan("")));
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto xi = std::distance(
            xs.begin(), std::find(xs.begin(), xs.end(), ms[i]));
        const auto yi = std::distance(
            ys.begin(), std::find(ys.begin(), ys.end(), gs[i]));
        values[yi][xi] = vs[i];
      }
      const std::string svg =
          render_heatmap(opts.sweep_heatmap, "m", "g", xs, ys, values);
      const fs::path out = plot_dir / (opts.sweep_heatmap + ".svg");
      write_text_file(out, svg);
      written.push_back(out.string());
    }
    if (written.empty())
      throw ConfigError("plot: nothing requested (use --series, --matrix or "
                        "--sweep-heatmap)");
    for (const auto& path : written) std::cout << path << "\n";
    return 0;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

}  // namespace znqed
