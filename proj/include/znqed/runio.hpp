#pragma once

// Mapping between QuenchSpecs and flat config files, figure presets, and
// the on-disk layout of a run directory:
//
//   <run>/manifest.txt        echo of every parameter + meta.* provenance;
//                             feeding it back through --config reproduces
//                             the run bit for bit
//   <run>/<scalar>.csv        time,<name> columns
//   <run>/<vector>.csv        time,x=1.. or time,link=1.. columns
//
// String runs keep the paired trajectories in string/ and vacuum/
// subdirectories; sweeps hold one cell_NNN/ run directory per grid point
// plus a summary.csv across cells.

#include <filesystem>
#include <string>
#include <vector>

#include "znqed/config.hpp"
#include "znqed/protocols.hpp"

namespace znqed {

inline constexpr const char* kToolVersion = "0.1.0";
// Environment variable consulted for the default output root.
inline constexpr const char* kOutRootEnv = "ZNQED_OUT_ROOT";

// Run mode tag stored under meta.mode.
enum class RunMode { quench, string, sweep };
std::string to_string(RunMode mode);

QuenchSpec spec_from_config(ConfigMap& cfg, RunMode mode);
// Sweep grids: the base spec expanded over sweep.m_values x sweep.g_values.
std::vector<QuenchSpec> grid_from_config(ConfigMap& cfg);

ConfigMap config_from_spec(const QuenchSpec& spec, RunMode mode);

// Named figure presets (fig3, fig4a, fig4c, fig9a, fig9b, fig9c, fig10,
// fig12); throws ConfigError for unknown names.
ConfigMap preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Overlays explicit config keys on top of a preset (config wins).
ConfigMap merge_configs(const ConfigMap& base, const ConfigMap& override);

void write_bundle_csvs(const std::filesystem::path& dir,
                       const TimeSeriesBundle& bundle);
void write_quench_run(const std::filesystem::path& dir,
                      const TimeSeriesBundle& bundle);
void write_string_run(const std::filesystem::path& dir,
                      const StringRunResult& result);
void write_sweep_run(const std::filesystem::path& dir,
                     const std::vector<QuenchSpec>& grid,
                     const std::vector<SweepCell>& cells,
                     const ConfigMap& sweep_config);

// Fresh (absent or empty) output directory, created on demand.
void prepare_run_dir(const std::filesystem::path& dir);

struct LoadedRun {
  std::filesystem::path dir;
  ConfigMap manifest;
};
LoadedRun load_run(const std::filesystem::path& dir);
std::filesystem::path series_path(const LoadedRun& run,
                                  const std::string& name);

}  // namespace znqed
