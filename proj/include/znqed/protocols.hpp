#pragma once

// Experiment drivers: vacuum quench, string evolution with a matched
// vacuum run, and parameter sweeps over (m, g) grids.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "znqed/evolve.hpp"
#include "znqed/model.hpp"
#include "znqed/observe.hpp"

namespace znqed {

struct ProbeSelection {
  bool rho = true;
  bool entropy = true;
  bool mean_field = true;
  bool field_profile = false;
  bool correlation = false;
  bool site_density = false;
};

ProbeSelection probes_from_names(const std::vector<std::string>& names);
std::vector<std::string> probe_names(const ProbeSelection& probes);

struct QuenchSpec {
  ModelParams params;
  double t_max = 5.0;
  IntegratorSpec integrator;
  int sample_every = 5;
  ProbeSelection probes;
  // Scaled external field eps = E_0/E_c applied as a sudden background
  // at t = 0 (realized through the angle phi).
  std::optional<double> epsilon;
  // Particle/antiparticle separation in sites; presence selects a string
  // run.
  std::optional<int> string_separation;
  // Width of the central-field window for string runs (clipped to the
  // number of links).
  int central_links = 12;

  void validate() const;
  // Params with phi resolved from epsilon (identity when epsilon unset).
  ModelParams effective_params() const;
};

// Chosen string endpoints for a separation of `sep` sites: the window of
// `sep` consecutive sites closest to the chain center whose left end is
// odd.
std::pair<int, int> string_endpoints(int sites, int sep);

struct TimeSeriesBundle {
  std::vector<double> sample_times;
  std::map<std::string, std::vector<double>> scalars;
  std::map<std::string, std::vector<std::vector<double>>> vectors;
  QuenchSpec spec;  // spec as executed, with phi resolved
  HamiltonianStats ham_stats;
  double wall_seconds = 0.0;
};

// Dirac-vacuum quench at the spec's couplings.
TimeSeriesBundle run_vacuum_quench(const QuenchSpec& spec);

struct StringRunResult {
  TimeSeriesBundle string_run;  // includes vacuum-subtracted channels
  TimeSeriesBundle vacuum_run;
};

// String initial state plus the matched vacuum run on the same basis and
// Hamiltonian; the string bundle carries `field_profile_sub` and
// `central_field_sum_sub` derived channels.
StringRunResult run_string(const QuenchSpec& spec);

struct SweepCell {
  std::size_t index = 0;
  bool ok = false;
  std::string error;
  TimeSeriesBundle bundle;                  // string bundle for string cells
  std::optional<TimeSeriesBundle> vacuum;   // matched vacuum for string cells
};

// Executes independent runs on a worker pool. Results are ordered by grid
// index regardless of scheduling; per-cell failures are recorded without
// aborting the sweep.
std::vector<SweepCell> run_sweep(const std::vector<QuenchSpec>& grid,
                                 int workers = 1);

}  // namespace znqed
