#include "full_oracle.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace znqed::oracle {

namespace {

constexpr std::size_t kDimGuard = 8'000'000;

std::size_t pow_n(int n, int e) {
  std::size_t out = 1;
  for (int i = 0; i < e; ++i) out *= static_cast<std::size_t>(n);
  return out;
}

}  // namespace

occ_t FullSpace::occupation(std::size_t idx) const {
  return static_cast<occ_t>(idx & ((std::size_t{1} << params.sites) - 1));
}

int FullSpace::link_k(std::size_t idx, int link) const {
  std::size_t digits = idx >> params.sites;
  for (int j = 1; j < link; ++j) digits /= params.n;
  return static_cast<int>(digits % params.n);
}

int FullSpace::link_level(std::size_t idx, int link) const {
  return level_lo(params.n) + link_k(idx, link);
}

FullSpace make_full_space(const ModelParams& params) {
  params.validate();
  FullSpace space;
  space.params = params;
  const std::size_t links = pow_n(params.n, params.sites - 1);
  const std::size_t occs = std::size_t{1} << params.sites;
  if (links > kDimGuard / occs)
    throw std::invalid_argument("full oracle space too large to enumerate");
  space.dim = occs * links;
  return space;
}

std::vector<Triplet> full_hamiltonian(const FullSpace& space) {
  const ModelParams& p = space.params;
  const int N = p.sites;
  std::vector<Triplet> out;
  out.reserve(space.dim * (N + 1));

  const std::size_t occ_count = std::size_t{1} << N;
  for (std::size_t idx = 0; idx < space.dim; ++idx) {
    const occ_t occ = space.occupation(idx);

    double diag = 0.0;
    for (int x = 1; x <= N; ++x)
      diag += p.m * ((x % 2 == 0) ? 1.0 : -1.0) * ((occ >> (x - 1)) & 1);
    for (int link = 1; link < N; ++link) {
      const double e = field_eigenvalue(space.link_k(idx, link), p.n, p.phi);
      diag += 0.5 * p.g * p.g * e * e;
    }
    out.push_back({idx, idx, diag});

    if (p.t_hop == 0.0) continue;
    // psi^+_{x+1} U_{x,x+1} psi_x: move a particle one site right and
    // raise the link cyclically (adjacent Jordan-Wigner strings cancel).
    std::size_t stride = occ_count;
    for (int x = 1; x < N; ++x) {
      const int left = (occ >> (x - 1)) & 1;
      const int right = (occ >> x) & 1;
      if (left == 1 && right == 0) {
        const occ_t occ2 = occ ^ ((occ_t{1} << (x - 1)) | (occ_t{1} << x));
        const int k = space.link_k(idx, x);
        const int k2 = (k + 1) % p.n;
        const std::ptrdiff_t shift =
            static_cast<std::ptrdiff_t>(occ2) - static_cast<std::ptrdiff_t>(occ) +
            static_cast<std::ptrdiff_t>(k2 - k) *
                static_cast<std::ptrdiff_t>(stride);
        const std::size_t idx2 = static_cast<std::size_t>(
            static_cast<std::ptrdiff_t>(idx) + shift);
        out.push_back({idx2, idx, -p.t_hop});
        out.push_back({idx, idx2, -p.t_hop});
      }
      stride *= static_cast<std::size_t>(p.n);
    }
  }
  return out;
}

std::vector<bool> gauss_mask(const FullSpace& space,
                             std::optional<int> boundary) {
  const ModelParams& p = space.params;
  std::vector<bool> mask(space.dim, true);
  for (std::size_t idx = 0; idx < space.dim; ++idx) {
    const occ_t occ = space.occupation(idx);
    bool ok = true;
    for (int x = 1; x < p.sites && ok; ++x) {
      if (x == 1 && !boundary) continue;  // site 1 fixes the sector
      const int prev =
          (x == 1) ? *boundary : space.link_level(idx, x - 1);
      const int expect =
          fold_level(prev + site_charge(x, (occ >> (x - 1)) & 1), p.n);
      ok = space.link_level(idx, x) == expect;
    }
    mask[idx] = ok;
  }
  return mask;
}

Eigen::MatrixXd restrict_to_mask(const FullSpace& space,
                                 const std::vector<Triplet>& triplets,
                                 const std::vector<bool>& mask) {
  std::vector<std::ptrdiff_t> position(space.dim, -1);
  std::ptrdiff_t count = 0;
  for (std::size_t i = 0; i < space.dim; ++i)
    if (mask[i]) position[i] = count++;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(count, count);
  for (const auto& t : triplets)
    if (position[t.row] >= 0 && position[t.col] >= 0)
      out(position[t.row], position[t.col]) += t.value;
  return out;
}

double closure_violation(const std::vector<Triplet>& triplets,
                         const std::vector<bool>& mask) {
  double worst = 0.0;
  for (const auto& t : triplets)
    if (mask[t.col] && !mask[t.row])
      worst = std::max(worst, std::abs(t.value));
  return worst;
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() +
                              solver.eigenvalues().size());
  return out;
}

std::vector<double> sorted_eigenvalues(const SparseOperator& op) {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(op.dim, op.dim);
  for (std::size_t i = 0; i < op.dim; ++i)
    for (std::size_t k = op.row_start[i]; k < op.row_start[i + 1]; ++k)
      dense(i, op.col[k]) += op.val[k];
  return sorted_eigenvalues(dense);
}

}  // namespace znqed::oracle
