#include "znqed/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace znqed {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ProbeBundle {
  std::vector<ScalarProbe> scalars;
  std::vector<VectorProbe> vectors;
};

ProbeBundle make_probes(const GaugeInvariantBasis& basis,
                        const ProbeSelection& sel) {
  ProbeBundle out;
  if (sel.rho)
    out.scalars.push_back(
        {"rho", [&basis](const StateVector& psi) {
           return particle_density(basis, psi);
         }});
  if (sel.entropy)
    out.scalars.push_back(
        {"entropy", [&basis](const StateVector& psi) {
           return half_chain_entropy(basis, psi);
         }});
  if (sel.mean_field)
    out.scalars.push_back(
        {"mean_field", [&basis](const StateVector& psi) {
           return mean_field(basis, psi);
         }});
  if (sel.field_profile)
    out.vectors.push_back(
        {"field_profile", [&basis](const StateVector& psi) {
           return field_profile(basis, psi);
         }});
  if (sel.correlation)
    out.vectors.push_back(
        {"correlation", [&basis](const StateVector& psi) {
           return connected_correlation(basis, psi);
         }});
  if (sel.site_density)
    out.vectors.push_back(
        {"site_density", [&basis](const StateVector& psi) {
           return site_density(basis, psi);
         }});
  return out;
}

TimeSeriesBundle bundle_from_trajectory(Trajectory&& traj,
                                        const QuenchSpec& spec,
                                        const HamiltonianStats& stats) {
  TimeSeriesBundle out;
  out.sample_times = std::move(traj.sample_times);
  out.scalars["norm"] = std::move(traj.norm_history);
  out.scalars["energy"] = std::move(traj.energy_history);
  for (std::size_t i = 0; i < traj.scalar_names.size(); ++i)
    out.scalars[traj.scalar_names[i]] = std::move(traj.scalar_series[i]);
  for (std::size_t i = 0; i < traj.vector_names.size(); ++i)
    out.vectors[traj.vector_names[i]] = std::move(traj.vector_series[i]);
  out.spec = spec;
  out.ham_stats = stats;
  return out;
}

}  // namespace

ProbeSelection probes_from_names(const std::vector<std::string>& names) {
  ProbeSelection sel{false, false, false, false, false, false};
  for (const auto& name : names) {
    if (name == "rho") sel.rho = true;
    else if (name == "entropy") sel.entropy = true;
    else if (name == "mean_field") sel.mean_field = true;
    else if (name == "field_profile") sel.field_profile = true;
    else if (name == "correlation") sel.correlation = true;
    else if (name == "site_density") sel.site_density = true;
    else throw ConfigError("unknown probe '" + name + "'");
  }
  return sel;
}

std::vector<std::string> probe_names(const ProbeSelection& p) {
  std::vector<std::string> out;
  if (p.rho) out.push_back("rho");
  if (p.entropy) out.push_back("entropy");
  if (p.mean_field) out.push_back("mean_field");
  if (p.field_profile) out.push_back("field_profile");
  if (p.correlation) out.push_back("correlation");
  if (p.site_density) out.push_back("site_density");
  return out;
}

void QuenchSpec::validate() const {
  params.validate();
  integrator.validate();
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (epsilon && string_separation)
    throw ConfigError(
        "epsilon and string presets are mutually exclusive; set phi "
        "explicitly to combine them");
  if (epsilon && params.phi != 0.0)
    throw ConfigError("set either epsilon or phi, not both");
  if (epsilon && params.m == 0.0)
    throw ConfigError("epsilon needs a nonzero mass (E_c = m^2/g)");
  if (string_separation) {
    const int sep = *string_separation;
    if (sep < 2 || sep % 2 != 0 || sep > params.sites)
      throw ConfigError(
          "string separation must be even, >= 2 and fit in the chain");
  }
  if (central_links < 1) throw ConfigError("central_links must be >= 1");
}

ModelParams QuenchSpec::effective_params() const {
  ModelParams p = params;
  if (epsilon) p.phi = phi_for_epsilon(p, *epsilon);
  return p;
}

std::pair<int, int> string_endpoints(int sites, int sep) {
  int x_left = (sites - sep + 2) / 2;
  if (x_left % 2 == 0) --x_left;
  if (x_left < 1) x_left = 1;
  return {x_left, x_left + sep - 1};
}

TimeSeriesBundle run_vacuum_quench(const QuenchSpec& spec) {
  spec.validate();
  if (spec.string_separation)
    throw ConfigError("run_vacuum_quench does not take a string preset");
  const auto start = Clock::now();

  QuenchSpec effective = spec;
  effective.params = spec.effective_params();
  effective.epsilon.reset();

  const GaugeInvariantBasis basis = build_basis(effective.params);
  HamiltonianStats stats;
  const SparseOperator H = build_hamiltonian(effective.params, basis, &stats);
  const StateVector psi0 = dirac_vacuum(basis);
  const ProbeBundle probes = make_probes(basis, spec.probes);

  Trajectory traj = evolve(H, psi0, spec.t_max, spec.integrator,
                           spec.sample_every, probes.scalars, probes.vectors);
  TimeSeriesBundle out =
      bundle_from_trajectory(std::move(traj), effective, stats);
  out.wall_seconds = seconds_since(start);
  return out;
}

StringRunResult run_string(const QuenchSpec& spec) {
  spec.validate();
  if (!spec.string_separation)
    throw ConfigError("run_string needs a string separation");
  const auto start = Clock::now();

  QuenchSpec effective = spec;
  effective.params = spec.effective_params();
  effective.epsilon.reset();
  effective.probes.field_profile = true;  // required for the subtraction

  const GaugeInvariantBasis basis = build_basis(effective.params);
  HamiltonianStats stats;
  const SparseOperator H = build_hamiltonian(effective.params, basis, &stats);
  const auto [x_left, x_right] =
      string_endpoints(effective.params.sites, *spec.string_separation);
  const StateVector psi_string = string_state(basis, x_left, x_right);
  const StateVector psi_vacuum = dirac_vacuum(basis);
  const ProbeBundle probes = make_probes(basis, effective.probes);

  Trajectory traj_s =
      evolve(H, psi_string, spec.t_max, spec.integrator, spec.sample_every,
             probes.scalars, probes.vectors);
  Trajectory traj_v =
      evolve(H, psi_vacuum, spec.t_max, spec.integrator, spec.sample_every,
             probes.scalars, probes.vectors);

  StringRunResult result;
  result.string_run =
      bundle_from_trajectory(std::move(traj_s), effective, stats);
  result.vacuum_run =
      bundle_from_trajectory(std::move(traj_v), effective, stats);

  const auto& prof_s = result.string_run.vectors.at("field_profile");
  const auto& prof_v = result.vacuum_run.vectors.at("field_profile");
  const auto sub = vacuum_subtracted_profile(
      result.string_run.sample_times, prof_s, result.vacuum_run.sample_times,
      prof_v);
  const int n_links =
      std::min(spec.central_links, effective.params.sites - 1);
  std::vector<double> sums(sub.size(), 0.0);
  std::vector<double> raw_sums(sub.size(), 0.0);
  for (std::size_t t = 0; t < sub.size(); ++t) {
    sums[t] = central_field_sum(sub[t], n_links);
    raw_sums[t] = central_field_sum(prof_s[t], n_links);
  }
  result.string_run.vectors["field_profile_sub"] = sub;
  result.string_run.scalars["central_field_sum_sub"] = std::move(sums);
  result.string_run.scalars["central_field_sum"] = std::move(raw_sums);

  result.string_run.wall_seconds = seconds_since(start);
  result.vacuum_run.wall_seconds = result.string_run.wall_seconds;
  return result;
}

std::vector<SweepCell> run_sweep(const std::vector<QuenchSpec>& grid,
                                 int workers) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  if (workers < 1) throw ConfigError("worker count must be >= 1");

  std::vector<SweepCell> cells(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      SweepCell& cell = cells[i];
      cell.index = i;
      try {
        if (grid[i].string_separation) {
          StringRunResult res = run_string(grid[i]);
          cell.bundle = std::move(res.string_run);
          cell.vacuum = std::move(res.vacuum_run);
        } else {
          cell.bundle = run_vacuum_quench(grid[i]);
        }
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  };

  const int pool = std::min<int>(workers, static_cast<int>(grid.size()));
  if (pool <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  return cells;
}

}  // namespace znqed
