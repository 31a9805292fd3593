// Command-line front end: quench | string | sweep | analyze | plot.

#include <CLI11.hpp>

#include <string>
#include <vector>

#include "znqed/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Z_n lattice QED quench simulator"};
  app.require_subcommand(1);

  znqed::RunOptions run_opts;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", run_opts.config_path,
                    "config file (or a manifest.txt from a previous run)");
    cmd->add_option("--preset", run_opts.preset,
                    "figure preset: fig3 fig4a fig4c fig9a fig9b fig9c "
                    "fig10 fig12");
    cmd->add_option("--out", run_opts.out_dir,
                    "output directory (default: $ZNQED_OUT_ROOT/<name>)");
    cmd->add_option("--workers", run_opts.workers, "sweep worker count");
  };
  CLI::App* quench = app.add_subcommand("quench", "Dirac-vacuum quench");
  CLI::App* string_cmd =
      app.add_subcommand("string", "string evolution with a matched vacuum");
  CLI::App* sweep = app.add_subcommand("sweep", "(m,g) parameter sweep");
  add_run_flags(quench);
  add_run_flags(string_cmd);
  add_run_flags(sweep);

  znqed::AnalyzeOptions an_opts;
  std::vector<double> rate_window;
  CLI::App* analyze =
      app.add_subcommand("analyze", "peak/period/fit reports for a run");
  analyze->add_option("run_dir", an_opts.run_dir, "run directory")
      ->required();
  analyze->add_option("--series", an_opts.series, "scalar series name");
  analyze->add_flag("--peaks", an_opts.peaks, "report local maxima");
  analyze->add_flag("--period", an_opts.period,
                    "report the first oscillation period");
  analyze->add_option("--prominence", an_opts.prominence,
                      "peak prominence threshold");
  analyze->add_option("--rate", rate_window,
                      "linear rate fit window: t_lo t_hi")
      ->expected(2);
  analyze->add_option("--fit", an_opts.fit_model,
                      "curve model: lorentzian gaussian reciprocal_linear "
                      "logarithmic");
  analyze->add_option("--fit-x", an_opts.fit_x,
                      "x column for sweep fits (default m)");
  analyze->add_option("--fit-y", an_opts.fit_y,
                      "y column for sweep fits (default --series)");
  analyze->add_option("--report", an_opts.report, "report file name");

  znqed::PlotOptions plot_opts;
  CLI::App* plot = app.add_subcommand("plot", "render SVG figures for a run");
  plot->add_option("run_dir", plot_opts.run_dir, "run directory")->required();
  plot->add_option("--series", plot_opts.series,
                   "scalar series to draw as line plots");
  plot->add_option("--matrix", plot_opts.matrices,
                   "vector series to draw as heatmaps");
  plot->add_option("--sweep-heatmap", plot_opts.sweep_heatmap,
                   "summary.csv column to draw over the (m,g) grid");

  CLI11_PARSE(app, argc, argv);

  if (quench->parsed()) return znqed::cmd_quench(run_opts);
  if (string_cmd->parsed()) return znqed::cmd_string(run_opts);
  if (sweep->parsed()) return znqed::cmd_sweep(run_opts);
  if (analyze->parsed()) {
    if (rate_window.size() == 2)
      an_opts.rate_window = {rate_window[0], rate_window[1]};
    return znqed::cmd_analyze(an_opts);
  }
  if (plot->parsed()) return znqed::cmd_plot(plot_opts);
  return 1;
}
