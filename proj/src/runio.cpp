#include "znqed/runio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "znqed/analysis.hpp"
#include "znqed/csv.hpp"

namespace znqed {

namespace fs = std::filesystem;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::quench: return "quench";
    case RunMode::string: return "string";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

QuenchSpec spec_from_config(ConfigMap& cfg, RunMode mode) {
  QuenchSpec spec;
  spec.params.n = cfg.get_int("model.n", spec.params.n);
  spec.params.sites = cfg.get_int("model.sites", spec.params.sites);
  spec.params.m = cfg.get_double("model.m", spec.params.m);
  if (cfg.get_string("model.g", "") == "paper")
    spec.params.g = std::sqrt(spec.params.n / std::numbers::pi);
  else
    spec.params.g = cfg.get_double("model.g", spec.params.g);
  spec.params.t_hop = cfg.get_double("model.t_hop", spec.params.t_hop);
  spec.params.phi = cfg.get_double("model.phi", spec.params.phi);
  spec.params.boundary_level =
      cfg.get_int("model.boundary_level", spec.params.boundary_level);

  spec.t_max = cfg.get_double("quench.t_max", spec.t_max);
  spec.sample_every = cfg.get_int("quench.sample_every", spec.sample_every);
  spec.epsilon = cfg.get_optional_double("quench.epsilon");
  spec.central_links = cfg.get_int("quench.central_links", spec.central_links);
  if (mode == RunMode::string) {
    spec.string_separation =
        cfg.get_optional_int("quench.string_separation");
    if (!spec.string_separation)
      throw ConfigError(cfg.source_name() +
                        ": string runs need quench.string_separation");
  } else if (cfg.has("quench.string_separation") && mode == RunMode::quench) {
    throw ConfigError(cfg.source_name() +
                      ": quench.string_separation is only valid for string "
                      "runs");
  }

  spec.integrator.method = integrator_method_from_string(
      cfg.get_string("integrator.method", "krylov"));
  spec.integrator.dt = cfg.get_double("integrator.dt", spec.integrator.dt);
  spec.integrator.krylov_dim =
      cfg.get_int("integrator.krylov_dim", spec.integrator.krylov_dim);
  spec.integrator.krylov_tol =
      cfg.get_double("integrator.krylov_tol", spec.integrator.krylov_tol);
  spec.integrator.renormalize =
      cfg.get_bool("integrator.renormalize", spec.integrator.renormalize);

  std::vector<std::string> default_probes = {"rho", "entropy", "mean_field"};
  if (mode == RunMode::string) default_probes.push_back("field_profile");
  spec.probes = probes_from_names(
      cfg.get_string_list("probes", default_probes));
  spec.validate();
  return spec;
}

std::vector<QuenchSpec> grid_from_config(ConfigMap& cfg) {
  const RunMode cell_mode =
      cfg.has("quench.string_separation") ? RunMode::string : RunMode::quench;
  const bool has_ms = cfg.has("sweep.m_values");
  const bool has_gs = cfg.has("sweep.g_values");
  std::vector<double> ms = cfg.get_double_list("sweep.m_values");
  std::vector<double> gs = cfg.get_double_list("sweep.g_values");
  if ((has_ms && ms.empty()) || (has_gs && gs.empty()))
    throw ConfigError(cfg.source_name() + ": sweep value list is empty");
  QuenchSpec base = spec_from_config(cfg, cell_mode);
  if (ms.empty()) ms = {base.params.m};
  if (gs.empty()) gs = {base.params.g};
  std::vector<QuenchSpec> grid;
  grid.reserve(ms.size() * gs.size());
  for (double m : ms)
    for (double g : gs) {
      QuenchSpec cell = base;
      cell.params.m = m;
      cell.params.g = g;
      cell.validate();
      grid.push_back(std::move(cell));
    }
  return grid;
}

ConfigMap config_from_spec(const QuenchSpec& spec, RunMode mode) {
  ConfigMap cfg;
  cfg.set("meta.format", "znqed-run-1");
  cfg.set("meta.version", kToolVersion);
  cfg.set("meta.mode", to_string(mode));
  cfg.set_int("model.n", spec.params.n);
  cfg.set_int("model.sites", spec.params.sites);
  cfg.set_double("model.m", spec.params.m);
  cfg.set_double("model.g", spec.params.g);
  cfg.set_double("model.t_hop", spec.params.t_hop);
  cfg.set_double("model.phi", spec.params.phi);
  cfg.set_int("model.boundary_level", spec.params.boundary_level);
  cfg.set_double("quench.t_max", spec.t_max);
  cfg.set_int("quench.sample_every", spec.sample_every);
  cfg.set_int("quench.central_links", spec.central_links);
  if (spec.epsilon) cfg.set_double("meta.epsilon", *spec.epsilon);
  if (spec.string_separation)
    cfg.set_int("quench.string_separation", *spec.string_separation);
  cfg.set("integrator.method", to_string(spec.integrator.method));
  cfg.set_double("integrator.dt", spec.integrator.dt);
  cfg.set_int("integrator.krylov_dim", spec.integrator.krylov_dim);
  cfg.set_double("integrator.krylov_tol", spec.integrator.krylov_tol);
  cfg.set_bool("integrator.renormalize", spec.integrator.renormalize);
  std::string probes;
  for (const auto& name : probe_names(spec.probes)) {
    if (!probes.empty()) probes += ",";
    probes += name;
  }
  cfg.set("probes", probes);
  return cfg;
}

namespace {

ConfigMap preset_base(int n, int sites, double m, double g, double t_max) {
  ConfigMap cfg;
  cfg.set_int("model.n", n);
  cfg.set_int("model.sites", sites);
  cfg.set_double("model.m", m);
  cfg.set_double("model.g", g);
  cfg.set_double("quench.t_max", t_max);
  return cfg;
}

}  // namespace

ConfigMap preset_config(const std::string& name) {
  const double g_paper = std::sqrt(3.0 / std::numbers::pi);
  if (name == "fig3") return preset_base(3, 4, 0.5, g_paper, 5.0);
  if (name == "fig4a") return preset_base(3, 12, 5.0, g_paper, 4.0);
  if (name == "fig4c") return preset_base(3, 12, -0.5, g_paper, 4.0);
  if (name == "fig9a" || name == "fig9b" || name == "fig9c") {
    double m = 0.1, g = 0.1;
    if (name == "fig9b") { m = 0.3; g = 0.8; }
    if (name == "fig9c") { m = 3.0; g = 1.42; }
    ConfigMap cfg = preset_base(3, 16, m, g, 4.0);
    cfg.set_int("quench.string_separation", 6);
    cfg.set("probes", "rho,entropy,mean_field,field_profile");
    return cfg;
  }
  if (name == "fig10") {
    ConfigMap cfg = preset_base(3, 12, 0.1, 0.1, 4.0);
    cfg.set_int("quench.string_separation", 4);
    cfg.set("sweep.m_values", "0.1,0.3,1.0,3.0");
    cfg.set("sweep.g_values", "0.1,0.8,1.42");
    cfg.set("probes", "rho,entropy,mean_field,field_profile");
    return cfg;
  }
  if (name == "fig12") {
    ConfigMap cfg = preset_base(3, 12, 4.5, g_paper, 2.0);
    cfg.set_double("quench.epsilon", 1.0);
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"fig3", "fig4a", "fig4c", "fig9a", "fig9b", "fig9c", "fig10",
          "fig12"};
}

ConfigMap merge_configs(const ConfigMap& base, const ConfigMap& override) {
  ConfigMap out = base;
  out.merge_from(override);
  return out;
}

void prepare_run_dir(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      throw IoError(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir, ec))
      throw IoError(dir.string() + " is not empty; refusing to overwrite");
  } else {
    fs::create_directories(dir, ec);
    if (ec)
      throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
}

void write_bundle_csvs(const fs::path& dir, const TimeSeriesBundle& bundle) {
  for (const auto& [name, values] : bundle.scalars)
    write_scalar_csv(dir / (name + ".csv"), bundle.sample_times, name, values);
  for (const auto& [name, rows] : bundle.vectors) {
    const bool per_site = name == "correlation" || name == "site_density";
    write_matrix_csv(dir / (name + ".csv"), bundle.sample_times,
                     per_site ? "x" : "link", rows);
  }
}

namespace {

void write_manifest(const fs::path& dir, const TimeSeriesBundle& bundle,
                    RunMode mode) {
  ConfigMap manifest = config_from_spec(bundle.spec, mode);
  manifest.set_double("meta.wall_seconds", bundle.wall_seconds);
  manifest.set_int("meta.hopping_entries",
                   static_cast<long long>(bundle.ham_stats.hopping_entries));
  manifest.set_int("meta.wrap_entries",
                   static_cast<long long>(bundle.ham_stats.wrap_entries));
  std::string series;
  for (const auto& [name, _] : bundle.scalars) {
    if (!series.empty()) series += ",";
    series += name;
  }
  for (const auto& [name, _] : bundle.vectors) {
    if (!series.empty()) series += ",";
    series += name;
  }
  manifest.set("meta.series", series);
  write_text_file(dir / "manifest.txt", manifest.serialize());
}

}  // namespace

void write_quench_run(const fs::path& dir, const TimeSeriesBundle& bundle) {
  prepare_run_dir(dir);
  write_manifest(dir, bundle, RunMode::quench);
  write_bundle_csvs(dir, bundle);
}

void write_string_run(const fs::path& dir, const StringRunResult& result) {
  prepare_run_dir(dir);
  write_manifest(dir, result.string_run, RunMode::string);
  fs::create_directories(dir / "string");
  fs::create_directories(dir / "vacuum");
  write_bundle_csvs(dir / "string", result.string_run);
  write_bundle_csvs(dir / "vacuum", result.vacuum_run);
}

void write_sweep_run(const fs::path& dir, const std::vector<QuenchSpec>& grid,
                     const std::vector<SweepCell>& cells,
                     const ConfigMap& sweep_config) {
  prepare_run_dir(dir);
  ConfigMap manifest =
      ConfigMap::from_text(sweep_config.serialize(), "<sweep>");
  manifest.set("meta.format", "znqed-run-1");
  manifest.set("meta.version", kToolVersion);
  manifest.set("meta.mode", to_string(RunMode::sweep));
  write_text_file(dir / "manifest.txt", manifest.serialize());

  // Failed cells keep their row (all-nan metrics); the message lives in
  // cell_NNN/error.txt.
  std::string summary =
      "index,m,g,ok,rho_max,rho_final,rho_first_peak_value,"
      "rho_first_peak_time,rho_period,entropy_max,"
      "central_field_sum_sub_initial,central_field_sum_sub_final\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const SweepCell& cell = cells[i];
    char head[64];
    std::snprintf(head, sizeof(head), "cell_%03zu", i);
    const fs::path cell_dir = dir / head;

    summary += std::to_string(i) + "," + format_double(grid[i].params.m) +
               "," + format_double(grid[i].params.g) + "," +
               (cell.ok ? "1" : "0");
    if (!cell.ok) {
      fs::create_directories(cell_dir);
      write_text_file(cell_dir / "error.txt", cell.error + "\n");
      summary += ",nan,nan,nan,nan,nan,nan,nan,nan\n";
      continue;
    }
    if (grid[i].string_separation) {
      StringRunResult pair;
      pair.string_run = cell.bundle;
      pair.vacuum_run = *cell.vacuum;
      write_string_run(cell_dir, pair);
    } else {
      write_quench_run(cell_dir, cell.bundle);
    }

    auto scalar_stats = [&](const std::string& name, double& mx,
                            double& last) {
      mx = std::nan("");
      last = std::nan("");
      auto it = cell.bundle.scalars.find(name);
      if (it == cell.bundle.scalars.end() || it->second.empty()) return;
      mx = *std::max_element(it->second.begin(), it->second.end());
      last = it->second.back();
    };
    double rho_max, rho_final, s_max, s_last;
    scalar_stats("rho", rho_max, rho_final);
    scalar_stats("entropy", s_max, s_last);

    double peak_v = std::nan(""), peak_t = std::nan(""),
           period = std::nan("");
    auto rho_it = cell.bundle.scalars.find("rho");
    if (rho_it != cell.bundle.scalars.end() && rho_it->second.size() >= 3) {
      const auto peaks =
          find_peaks(cell.bundle.sample_times, rho_it->second);
      if (!peaks.empty()) {
        peak_v = peaks[0].value;
        peak_t = peaks[0].t_peak;
      }
      if (peaks.size() >= 2) period = peaks[1].t_peak - peaks[0].t_peak;
    }
    double sub0 = std::nan(""), sub_final = std::nan("");
    auto sub_it = cell.bundle.scalars.find("central_field_sum_sub");
    if (sub_it != cell.bundle.scalars.end() && !sub_it->second.empty()) {
      sub0 = sub_it->second.front();
      sub_final = sub_it->second.back();
    }
    for (double v : {rho_max, rho_final, peak_v, peak_t, period, s_max, sub0,
                     sub_final})
      summary += "," + format_double(v);
    summary += "\n";
  }
  write_text_file(dir / "summary.csv", summary);
}

LoadedRun load_run(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.txt";
  if (!fs::exists(manifest))
    throw IoError(dir.string() + " has no manifest.txt; not a run directory");
  LoadedRun run{dir, ConfigMap::from_file(manifest)};
  return run;
}

std::filesystem::path series_path(const LoadedRun& run,
                                  const std::string& name) {
  const std::string file = name + ".csv";
  for (const fs::path& candidate :
       {run.dir / file, run.dir / "string" / file, run.dir / "vacuum" / file})
    if (fs::exists(candidate)) return candidate;
  throw IoError(run.dir.string() + ": no series named '" + name + "'");
}

}  // namespace znqed
