#include "znqed/observe.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>

namespace znqed {

namespace {

constexpr double kEigenvalueFloor = 1e-14;

void check_tag(const GaugeInvariantBasis& basis, const StateVector& psi) {
  if (!(basis.tag() == psi.basis_tag))
    throw std::logic_error("observable: state does not live on this basis");
}

// Squared-amplitude weights normalized to unit total.
std::vector<double> weights(const StateVector& psi) {
  std::vector<double> w(psi.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::norm(psi.amplitudes[i]);
    total += w[i];
  }
  if (total <= 0.0) throw NumericalError("observable on a zero state");
  for (double& v : w) v /= total;
  return w;
}

int density_count(occ_t occ, int sites) {
  int count = 0;
  for (int x = 1; x <= sites; ++x) {
    const int occupied = (occ >> (x - 1)) & 1;
    count += (x % 2 == 1) ? (1 - occupied) : occupied;
  }
  return count;
}

}  // namespace

double particle_density(const GaugeInvariantBasis& basis,
                        const StateVector& psi) {
  check_tag(basis, psi);
  const int N = basis.params().sites;
  const auto w = weights(psi);
  double rho = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    rho += w[i] * density_count(basis.occupation(i), N);
  }
  return rho / N;
}

SiteSeries site_density(const GaugeInvariantBasis& basis,
                        const StateVector& psi) {
  check_tag(basis, psi);
  const int N = basis.params().sites;
  const auto w = weights(psi);
  SiteSeries out(N, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const occ_t occ = basis.occupation(i);
    for (int x = 1; x <= N; ++x)
      out[x - 1] += w[i] * ((occ >> (x - 1)) & 1);
  }
  return out;
}

FieldProfile field_profile(const GaugeInvariantBasis& basis,
                           const StateVector& psi) {
  check_tag(basis, psi);
  const ModelParams& p = basis.params();
  const auto w = weights(psi);
  FieldProfile out(p.sites - 1, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto levels = basis.link_levels(i);
    for (int j = 0; j < p.sites - 1; ++j)
      out[j] += w[i] * field_of_level(levels[j], p.n, p.phi);
  }
  return out;
}

double mean_field(const GaugeInvariantBasis& basis, const StateVector& psi) {
  const FieldProfile prof = field_profile(basis, psi);
  double acc = 0.0;
  for (double v : prof) acc += v;
  return acc / static_cast<double>(prof.size());
}

double half_chain_entropy(const GaugeInvariantBasis& basis,
                          const StateVector& psi, int cut, bool base2) {
  check_tag(basis, psi);
  const ModelParams& p = basis.params();
  const int N = p.sites;
  if (cut < 0) cut = N / 2;
  if (cut < 1 || cut >= N)
    throw std::invalid_argument("entropy cut must lie strictly inside 1..N-1");

  // Amplitude matrix between the (boundary sector, left occupations) and
  // (right occupations) labels. Link levels are functions of the left key
  // and add no dimensions of their own; the link crossing the cut rides
  // along with the left block.
  const int n = p.n;
  const int lo = level_lo(n);
  const std::size_t rows =
      (std::size_t{1} << cut) * (basis.all_sectors() ? n : 1);
  const std::size_t cols = std::size_t{1} << (N - cut);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, cols);

  double total = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const cplx a = psi.amplitudes[i];
    if (a == cplx{0.0, 0.0}) continue;
    total += std::norm(a);
    const occ_t occ = basis.occupation(i);
    const occ_t left = occ & ((occ_t{1} << cut) - 1);
    const occ_t right = occ >> cut;
    std::size_t row = left;
    if (basis.all_sectors())
      row |= static_cast<std::size_t>(basis.boundary_level(i) - lo) << cut;
    M(row, right) += a;
  }
  if (total <= 0.0) throw NumericalError("entropy of a zero state");
  M /= std::sqrt(total);

  // Entanglement spectrum = eigenvalues of M M^+.
  Eigen::MatrixXcd rho_a;
  if (rows <= cols)
    rho_a = M * M.adjoint();
  else
    rho_a = M.adjoint() * M;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_a);

  double entropy = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()[k];
    if (lambda < kEigenvalueFloor) continue;
    entropy -= lambda * std::log(lambda);
  }
  return base2 ? entropy / std::log(2.0) : entropy;
}

SiteSeries connected_correlation(const GaugeInvariantBasis& basis,
                                 const StateVector& psi, int ref) {
  check_tag(basis, psi);
  const int N = basis.params().sites;
  if (ref < 0) ref = N / 2;
  if (ref < 1 || ref > N)
    throw std::invalid_argument("correlation reference site out of range");

  const auto w = weights(psi);
  SiteSeries mean(N, 0.0);
  SiteSeries joint(N, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const occ_t occ = basis.occupation(i);
    const int n_ref = (occ >> (ref - 1)) & 1;
    for (int x = 1; x <= N; ++x) {
      const int n_x = (occ >> (x - 1)) & 1;
      mean[x - 1] += w[i] * n_x;
      joint[x - 1] += w[i] * n_ref * n_x;
    }
  }
  SiteSeries out(N, 0.0);
  for (int x = 0; x < N; ++x) out[x] = joint[x] - mean[ref - 1] * mean[x];
  return out;
}

std::vector<FieldProfile> vacuum_subtracted_profile(
    std::span<const double> times_a, std::span<const FieldProfile> profiles_a,
    std::span<const double> times_b,
    std::span<const FieldProfile> profiles_b) {
  if (times_a.size() != times_b.size() ||
      profiles_a.size() != profiles_b.size() ||
      times_a.size() != profiles_a.size())
    throw std::invalid_argument("trajectories are not aligned");
  std::vector<FieldProfile> out(profiles_a.size());
  for (std::size_t t = 0; t < profiles_a.size(); ++t) {
    if (times_a[t] != times_b[t])
      throw std::invalid_argument("trajectories sample different times");
    if (profiles_a[t].size() != profiles_b[t].size())
      throw std::invalid_argument("profiles have different link counts");
    out[t].resize(profiles_a[t].size());
    for (std::size_t j = 0; j < profiles_a[t].size(); ++j)
      out[t][j] = profiles_a[t][j] - profiles_b[t][j];
  }
  return out;
}

int central_window_start(int total_links, int n_links) {
  if (n_links < 1 || n_links > total_links)
    throw std::invalid_argument("central window wider than the chain");
  return (total_links - n_links + 1) / 2;
}

double central_field_sum(const FieldProfile& profile, int n_links) {
  const int start =
      central_window_start(static_cast<int>(profile.size()), n_links);
  double acc = 0.0;
  for (int j = start; j < start + n_links; ++j) acc += profile[j];
  return acc;
}

}  // namespace znqed
