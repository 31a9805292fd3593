#include "znqed/evolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

namespace znqed {

namespace {

constexpr int kKrylovHardMax = 300;

double norm_of(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& a : v) acc += std::norm(a);
  return std::sqrt(acc);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

void check_finite(const StateVector& psi, double t) {
  if (std::isfinite(psi.recorded_norm)) return;
  throw NumericalError("non-finite amplitudes at t = " + std::to_string(t));
}

// One classical RK4 stage combination for y' = -i H y.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const SparseOperator& H) : H_(H) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->resize(H.dim);
  }

  void advance(StateVector& psi, double dt) {
    auto deriv = [this](std::span<const cplx> in, std::span<cplx> out) {
      H_.apply(in, out);
      for (cplx& v : out) v *= cplx{0.0, -1.0};
    };
    auto& y = psi.amplitudes;
    deriv(y, k1_);
    stage(y, k1_, 0.5 * dt);
    deriv(tmp_, k2_);
    stage(y, k2_, 0.5 * dt);
    deriv(tmp_, k3_);
    stage(y, k3_, dt);
    deriv(tmp_, k4_);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += (dt / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    psi.refresh_norm();
  }

 private:
  void stage(const std::vector<cplx>& y, const std::vector<cplx>& k,
             double h) {
    for (std::size_t i = 0; i < y.size(); ++i) tmp_[i] = y[i] + h * k[i];
  }

  const SparseOperator& H_;
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

// Lanczos subspace propagator. The tridiagonal basis is grown until the
// a-posteriori local error estimate dt*beta_m*|u_m| meets the tolerance;
// if the hard cap is hit the step is split in two.
class KrylovStepper {
 public:
  KrylovStepper(const SparseOperator& H, const IntegratorSpec& spec)
      : H_(H), tol_(spec.krylov_tol), initial_cap_(spec.krylov_dim) {}

  void advance(StateVector& psi, double dt) {
    advance_impl(psi.amplitudes, dt, 0);
    psi.refresh_norm();
  }

 private:
  void advance_impl(std::vector<cplx>& y, double dt, int depth) {
    const double nrm = norm_of(y);
    if (nrm == 0.0) return;
    if (!std::isfinite(nrm))
      throw NumericalError("non-finite state entering a Krylov step");

    const std::size_t dim = y.size();
    const int max_m =
        static_cast<int>(std::min<std::size_t>(kKrylovHardMax, dim));
    int cap = std::clamp(initial_cap_, 2, max_m);

    ensure_rows(1, dim);
    auto& v0 = basis_[0];
    for (std::size_t i = 0; i < dim; ++i) v0[i] = y[i] / nrm;
    alpha_.clear();
    beta_.clear();

    int m = 0;
    bool happy = false;
    Eigen::VectorXcd u;
    while (true) {
      // Extend the tridiagonalization by one vector.
      ensure_rows(m + 2, dim);
      auto& v = basis_[m];
      auto& w = basis_[m + 1];
      H_.apply(v, w);
      cplx a = dot(v, w);
      for (std::size_t i = 0; i < dim; ++i) w[i] -= a * v[i];
      if (m > 0) {
        const double b = beta_[m - 1];
        auto& vp = basis_[m - 1];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= b * vp[i];
      }
      // One full re-orthogonalization pass keeps the basis clean over
      // many steps.
      for (int j = 0; j <= m; ++j) {
        const cplx c = dot(basis_[j], w);
        if (c == cplx{0.0, 0.0}) continue;
        auto& vj = basis_[j];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * vj[i];
        if (j == m) a += c;
      }
      alpha_.push_back(a.real());
      const double b = norm_of(w);
      ++m;

      if (b < 1e-13 * std::max(1.0, std::abs(alpha_.back())) ||
          m == static_cast<int>(dim)) {
        happy = true;  // invariant subspace: the small exponential is exact
        u = small_exponential(m, dt);
        break;
      }
      beta_.push_back(b);
      for (std::size_t i = 0; i < dim; ++i) w[i] /= b;

      if (m >= 2) {
        u = small_exponential(m, dt);
        const double err = std::abs(dt) * b * std::abs(u[m - 1]);
        if (err <= tol_) break;
      }
      if (m == cap) {
        if (cap < max_m) {
          cap = std::min(max_m, cap + std::max(cap / 2, 5));
          continue;
        }
        // Out of room: halve the step instead of accepting the error.
        if (depth < 24) {
          advance_impl(y, 0.5 * dt, depth + 1);
          advance_impl(y, 0.5 * dt, depth + 1);
          return;
        }
        throw NumericalError("Krylov propagator failed to converge");
      }
    }
    (void)happy;

    for (std::size_t i = 0; i < dim; ++i) {
      cplx acc{0.0, 0.0};
      for (int j = 0; j < m; ++j) acc += u[j] * basis_[j][i];
      y[i] = nrm * acc;
    }
  }

  // u = exp(-i dt T_m) e_1 through the dense eigendecomposition of the
  // symmetric tridiagonal T_m.
  Eigen::VectorXcd small_exponential(int m, double dt) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alpha_[j];
      if (j + 1 < m) {
        T(j, j + 1) = beta_[j];
        T(j + 1, j) = beta_[j];
      }
    }
    solver_.compute(T);
    const auto& evals = solver_.eigenvalues();
    const auto& evecs = solver_.eigenvectors();
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(m);
    for (int j = 0; j < m; ++j) {
      const cplx phase = std::exp(cplx{0.0, -dt * evals[j]});
      const double w0 = evecs(0, j);
      for (int i = 0; i < m; ++i) u[i] += evecs(i, j) * phase * w0;
    }
    return u;
  }

  void ensure_rows(int count, std::size_t dim) {
    while (static_cast<int>(basis_.size()) < count)
      basis_.emplace_back(dim);
    for (auto& row : basis_)
      if (row.size() != dim) row.assign(dim, cplx{});
  }

  const SparseOperator& H_;
  double tol_;
  int initial_cap_;
  std::vector<std::vector<cplx>> basis_;
  std::vector<double> alpha_, beta_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

double energy_expectation(const SparseOperator& H, const StateVector& psi,
                          std::vector<cplx>& scratch) {
  scratch.resize(psi.dim());
  H.apply(psi.amplitudes, scratch);
  const cplx e = dot(psi.amplitudes, scratch);
  const double n2 = dot(psi.amplitudes, psi.amplitudes).real();
  return n2 > 0.0 ? e.real() / n2 : 0.0;
}

}  // namespace

void IntegratorSpec::validate() const {
  if (!(dt > 0.0)) throw ConfigError("integrator dt must be positive");
  if (krylov_dim < 2) throw ConfigError("krylov_dim must be >= 2");
  if (!(krylov_tol > 0.0)) throw ConfigError("krylov_tol must be positive");
}

IntegratorMethod integrator_method_from_string(const std::string& name) {
  if (name == "rk4" || name == "RK4") return IntegratorMethod::RK4;
  if (name == "krylov" || name == "Krylov") return IntegratorMethod::Krylov;
  throw ConfigError("unknown integrator method '" + name + "'");
}

std::string to_string(IntegratorMethod method) {
  return method == IntegratorMethod::RK4 ? "rk4" : "krylov";
}

StateVector step(const SparseOperator& H, const StateVector& psi,
                 const IntegratorSpec& spec) {
  spec.validate();
  if (!(H.basis_tag == psi.basis_tag))
    throw std::logic_error("step: operator and state basis tags differ");
  StateVector out = psi;
  if (spec.method == IntegratorMethod::RK4) {
    Rk4Stepper stepper(H);
    stepper.advance(out, spec.dt);
  } else {
    KrylovStepper stepper(H, spec);
    stepper.advance(out, spec.dt);
  }
  if (spec.renormalize) out.normalize();
  check_finite(out, spec.dt);
  return out;
}

Trajectory evolve(const SparseOperator& H, const StateVector& psi0,
                  double t_max, const IntegratorSpec& spec, int sample_every,
                  const std::vector<ScalarProbe>& scalar_probes,
                  const std::vector<VectorProbe>& vector_probes) {
  spec.validate();
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (!(H.basis_tag == psi0.basis_tag))
    throw std::logic_error("evolve: operator and state basis tags differ");

  const long nsteps = std::lround(t_max / spec.dt);

  Trajectory traj;
  for (const auto& p : scalar_probes) traj.scalar_names.push_back(p.name);
  for (const auto& p : vector_probes) traj.vector_names.push_back(p.name);
  traj.scalar_series.resize(scalar_probes.size());
  traj.vector_series.resize(vector_probes.size());

  StateVector psi = psi0;
  psi.refresh_norm();
  std::vector<cplx> scratch;

  auto sample = [&](long step_index) {
    traj.sample_times.push_back(step_index * spec.dt);
    traj.norm_history.push_back(psi.recorded_norm);
    traj.energy_history.push_back(energy_expectation(H, psi, scratch));
    for (std::size_t i = 0; i < scalar_probes.size(); ++i)
      traj.scalar_series[i].push_back(scalar_probes[i].fn(psi));
    for (std::size_t i = 0; i < vector_probes.size(); ++i)
      traj.vector_series[i].push_back(vector_probes[i].fn(psi));
  };

  sample(0);

  Rk4Stepper rk4(H);
  KrylovStepper krylov(H, spec);
  for (long k = 1; k <= nsteps; ++k) {
    if (spec.method == IntegratorMethod::RK4)
      rk4.advance(psi, spec.dt);
    else
      krylov.advance(psi, spec.dt);
    if (spec.renormalize) psi.normalize();
    check_finite(psi, k * spec.dt);
    if (k % sample_every == 0 || k == nsteps) sample(k);
  }
  return traj;
}

}  // namespace znqed
