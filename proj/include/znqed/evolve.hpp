#pragma once

// Real-time propagation d|psi>/dt = -i H |psi| under a fixed sparse
// Hamiltonian: a classical RK4 stepper and a Lanczos (Krylov) subspace
// exponential with adaptive subspace growth.

#include <functional>
#include <string>
#include <vector>

#include "znqed/model.hpp"

namespace znqed {

enum class IntegratorMethod { RK4, Krylov };

struct IntegratorSpec {
  IntegratorMethod method = IntegratorMethod::Krylov;
  double dt = 0.01;
  int krylov_dim = 20;       // initial subspace cap, grown on demand
  double krylov_tol = 1e-10; // local error target per step
  bool renormalize = false;  // rescale to unit norm after each step

  void validate() const;
};

IntegratorMethod integrator_method_from_string(const std::string& name);
std::string to_string(IntegratorMethod method);

// Advances the state by one step of spec.dt. Throws NumericalError when
// amplitudes leave the finite range.
StateVector step(const SparseOperator& H, const StateVector& psi,
                 const IntegratorSpec& spec);

// Observable hooks evaluated at sampling instants.
struct ScalarProbe {
  std::string name;
  std::function<double(const StateVector&)> fn;
};
struct VectorProbe {
  std::string name;
  std::function<std::vector<double>(const StateVector&)> fn;
};

struct Trajectory {
  std::vector<double> sample_times;
  std::vector<double> norm_history;
  std::vector<double> energy_history;  // <H> normalized by the state norm
  std::vector<std::string> scalar_names;
  std::vector<std::vector<double>> scalar_series;  // [probe][sample]
  std::vector<std::string> vector_names;
  std::vector<std::vector<std::vector<double>>> vector_series;
};

// Repeated stepping to t_max with probe evaluation every sample_every
// steps (the initial state is always sampled).
Trajectory evolve(const SparseOperator& H, const StateVector& psi0,
                  double t_max, const IntegratorSpec& spec, int sample_every,
                  const std::vector<ScalarProbe>& scalar_probes = {},
                  const std::vector<VectorProbe>& vector_probes = {});

}  // namespace znqed
