#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "full_oracle.hpp"
#include "znqed/model.hpp"
#include "znqed/observe.hpp"

using namespace znqed;

namespace {

ModelParams params_for(int n, int sites) {
  ModelParams p;
  p.n = n;
  p.sites = sites;
  p.m = 0.4;
  p.g = 1.1;
  return p;
}

StateVector basis_state(const GaugeInvariantBasis& basis, std::size_t idx) {
  StateVector psi;
  psi.amplitudes.assign(basis.dim(), cplx{0.0, 0.0});
  psi.amplitudes[idx] = cplx{1.0, 0.0};
  psi.basis_tag = basis.tag();
  psi.recorded_norm = 1.0;
  return psi;
}

StateVector random_state(const GaugeInvariantBasis& basis, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  StateVector psi;
  psi.amplitudes.resize(basis.dim());
  for (auto& a : psi.amplitudes) a = cplx{dist(rng), dist(rng)};
  psi.basis_tag = basis.tag();
  psi.normalize();
  return psi;
}

// Independent entropy: build the reduced density matrix over left
// occupation labels from pairwise partial inner products and diagonalize
// it directly.
double oracle_entropy(const GaugeInvariantBasis& basis, const StateVector& psi,
                      int cut) {
  const int N = basis.params().sites;
  const std::size_t rows = std::size_t{1} << cut;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(rows, rows);
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if (psi.amplitudes[i] == cplx{0.0, 0.0}) continue;
    for (std::size_t j = 0; j < psi.dim(); ++j) {
      if (psi.amplitudes[j] == cplx{0.0, 0.0}) continue;
      const occ_t oi = basis.occupation(i);
      const occ_t oj = basis.occupation(j);
      if ((oi >> cut) != (oj >> cut)) continue;  // right labels differ
      const std::size_t li = oi & ((occ_t{1} << cut) - 1);
      const std::size_t lj = oj & ((occ_t{1} << cut) - 1);
      rho(li, lj) += psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  double S = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda > 1e-14) S -= lambda * std::log2(lambda);
  }
  return S;
}

}  // namespace

TEST_CASE("particle density on reference configurations") {
  const ModelParams p = params_for(3, 6);
  const auto basis = build_basis(p);
  const int N = p.sites;

  const auto vac = dirac_vacuum(basis);
  CHECK(particle_density(basis, vac) == doctest::Approx(0.0).epsilon(1e-15));

  // All parities flipped: the maximal-meson configuration.
  const occ_t flipped =
      static_cast<occ_t>(~dirac_occupation(N)) & ((occ_t{1} << N) - 1);
  const auto mesons = basis_state(basis, basis.index_of(flipped, 0));
  CHECK(particle_density(basis, mesons) == doctest::Approx(1.0));

  // Equal superposition of the vacuum and one adjacent meson.
  occ_t meson = dirac_occupation(N) ^ 0b11;  // move site 1 to site 2
  StateVector mix = basis_state(basis, basis.index_of(meson, 0));
  mix.amplitudes[basis.index_of(dirac_occupation(N), 0)] =
      cplx{1.0 / std::sqrt(2.0), 0.0};
  mix.amplitudes[basis.index_of(meson, 0)] = cplx{1.0 / std::sqrt(2.0), 0.0};
  mix.refresh_norm();
  CHECK(particle_density(basis, mix) ==
        doctest::Approx(1.0 / N).epsilon(1e-14));

  // Density stays inside [0, 1] on random states.
  for (unsigned seed : {1u, 2u, 3u}) {
    const double rho = particle_density(basis, random_state(basis, seed));
    CHECK(rho >= 0.0);
    CHECK(rho <= 1.0);
  }
}

TEST_CASE("unnormalized states are normalized internally") {
  const ModelParams p = params_for(3, 4);
  const auto basis = build_basis(p);
  auto psi = random_state(basis, 7);
  const double rho_unit = particle_density(basis, psi);
  for (auto& a : psi.amplitudes) a *= 0.35;
  psi.refresh_norm();
  CHECK(particle_density(basis, psi) ==
        doctest::Approx(rho_unit).epsilon(1e-13));
}

TEST_CASE("field profile and mean field") {
  const ModelParams p = params_for(3, 16);
  const auto basis = build_basis(p);
  const double u = std::sqrt(2.0 * std::numbers::pi / 3.0);

  const auto vac = dirac_vacuum(basis);
  for (double e : field_profile(basis, vac))
    CHECK(e == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(mean_field(basis, vac) == doctest::Approx(0.0).epsilon(1e-15));

  const auto str = string_state(basis, 5, 10);
  const auto prof = field_profile(basis, str);
  for (int j = 0; j < 15; ++j) {
    if (j >= 4 && j <= 8)
      CHECK(prof[j] == doctest::Approx(u).epsilon(1e-14));
    else
      CHECK(prof[j] == doctest::Approx(0.0).epsilon(1e-15));
  }

  // A single meson averages one flux unit over the links.
  const auto meson = string_state(basis, 5, 6);
  CHECK(mean_field(basis, meson) == doctest::Approx(u / 15.0).epsilon(1e-14));
}

TEST_CASE("entropy vanishes on product states and is 1 bit on a Bell pair") {
  const ModelParams p = params_for(3, 6);
  const auto basis = build_basis(p);
  CHECK(half_chain_entropy(basis, dirac_vacuum(basis)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t idx : {std::size_t{3}, std::size_t{17}, std::size_t{40}})
    CHECK(half_chain_entropy(basis, basis_state(basis, idx)) ==
          doctest::Approx(0.0).epsilon(1e-12));

  ModelParams p2 = params_for(3, 2);
  const auto basis2 = build_basis(p2);
  StateVector bell;
  bell.amplitudes.assign(basis2.dim(), cplx{0.0, 0.0});
  bell.amplitudes[basis2.index_of(0b01, 0)] = cplx{1.0 / std::sqrt(2.0), 0.0};
  bell.amplitudes[basis2.index_of(0b10, 0)] = cplx{1.0 / std::sqrt(2.0), 0.0};
  bell.basis_tag = basis2.tag();
  bell.recorded_norm = 1.0;
  CHECK(half_chain_entropy(basis2, bell, 1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Natural-log variant.
  CHECK(half_chain_entropy(basis2, bell, 1, false) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("entropy matches the product-space oracle at every cut") {
  const ModelParams p = params_for(3, 6);
  const auto basis = build_basis(p);
  for (unsigned seed : {11u, 12u}) {
    const auto psi = random_state(basis, seed);
    for (int cut = 1; cut < 6; ++cut)
      CHECK(half_chain_entropy(basis, psi, cut) ==
            doctest::Approx(oracle_entropy(basis, psi, cut)).epsilon(1e-10));
  }
  // All boundary sectors populated.
  const auto all = build_basis(p, true);
  const auto psi = random_state(all, 13);
  CHECK(half_chain_entropy(all, psi, 3) >= 0.0);
  CHECK(half_chain_entropy(all, psi, 3) <=
        3.0 + std::log2(3.0) + 1e-9);
}

TEST_CASE("entropy is symmetric between the two blocks") {
  // Complementary reduced density matrix, grouped by right labels.
  const ModelParams p = params_for(3, 6);
  const auto basis = build_basis(p);
  for (unsigned seed : {41u, 42u}) {
    const auto psi = random_state(basis, seed);
    for (int cut : {2, 3, 4}) {
      const std::size_t cols = std::size_t{1} << (6 - cut);
      Eigen::MatrixXcd rho_b = Eigen::MatrixXcd::Zero(cols, cols);
      for (std::size_t i = 0; i < psi.dim(); ++i)
        for (std::size_t j = 0; j < psi.dim(); ++j) {
          const occ_t oi = basis.occupation(i);
          const occ_t oj = basis.occupation(j);
          const occ_t mask = (occ_t{1} << cut) - 1;
          if ((oi & mask) != (oj & mask)) continue;
          rho_b(oi >> cut, oj >> cut) +=
              psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_b);
      double s_b = 0.0;
      for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda > 1e-14) s_b -= lambda * std::log2(lambda);
      }
      CHECK(half_chain_entropy(basis, psi, cut) ==
            doctest::Approx(s_b).epsilon(1e-10));
    }
  }
}

TEST_CASE("entropy bounds on random states") {
  const ModelParams p = params_for(3, 8);
  const auto basis = build_basis(p);
  for (unsigned seed : {3u, 4u}) {
    const auto psi = random_state(basis, seed);
    for (int cut = 1; cut < 8; ++cut) {
      const double S = half_chain_entropy(basis, psi, cut);
      CHECK(S >= -1e-12);
      CHECK(S <= std::min(cut, 8 - cut) + 1e-9);
    }
  }
  CHECK_THROWS_AS(half_chain_entropy(basis, random_state(basis, 5), 8),
                  std::invalid_argument);
}

TEST_CASE("connected correlations") {
  const ModelParams p = params_for(3, 8);
  const auto basis = build_basis(p);

  const auto vac = dirac_vacuum(basis);
  const auto g_vac = connected_correlation(basis, vac);
  for (int x = 0; x < 8; ++x)
    CHECK(g_vac[x] == doctest::Approx(0.0).epsilon(1e-15));

  for (unsigned seed : {21u, 22u}) {
    const auto psi = random_state(basis, seed);
    const auto g = connected_correlation(basis, psi);
    const int ref = 4;
    CHECK(g[ref - 1] >= -1e-12);
    CHECK(g[ref - 1] <= 0.25 + 1e-12);
    for (int x = 1; x <= 8; ++x) {
      CHECK(std::abs(g[x - 1]) <= 0.25 + 1e-12);
      // Exchange symmetry of the two-point function.
      const auto g_x = connected_correlation(basis, psi, x);
      CHECK(g_x[ref - 1] == doctest::Approx(g[x - 1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("diagonal observables agree with the product-space embedding") {
  const ModelParams p = params_for(3, 6);
  const auto basis = build_basis(p);
  const auto space = oracle::make_full_space(p);
  const auto psi = random_state(basis, 31);

  // Recompute density and the field profile from the embedded amplitudes.
  double rho_full = 0.0;
  std::vector<double> prof_full(p.sites - 1, 0.0);
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const double w = std::norm(psi.amplitudes[i]);
    if (w == 0.0) continue;
    const occ_t occ = basis.occupation(i);
    const auto levels = basis.link_levels(i);
    std::size_t full_idx = occ;
    std::size_t base = std::size_t{1} << p.sites;
    for (int j = 0; j < p.sites - 1; ++j) {
      full_idx += base * static_cast<std::size_t>(levels[j] - level_lo(p.n));
      base *= p.n;
    }
    CHECK(space.occupation(full_idx) == occ);
    int count = 0;
    for (int x = 1; x <= p.sites; ++x) {
      const int occupied =
          (space.occupation(full_idx) >> (x - 1)) & 1;
      count += (x % 2 == 1) ? (1 - occupied) : occupied;
    }
    rho_full += w * count / p.sites;
    for (int j = 1; j < p.sites; ++j)
      prof_full[j - 1] +=
          w * field_eigenvalue(space.link_k(full_idx, j), p.n, p.phi);
  }
  CHECK(particle_density(basis, psi) ==
        doctest::Approx(rho_full).epsilon(1e-12));
  const auto prof = field_profile(basis, psi);
  for (int j = 0; j < p.sites - 1; ++j)
    CHECK(prof[j] == doctest::Approx(prof_full[j]).epsilon(1e-12));
}

TEST_CASE("vacuum subtraction") {
  std::vector<double> times = {0.0, 0.5, 1.0};
  std::vector<FieldProfile> a = {{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
  std::vector<FieldProfile> b = {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
  const auto sub = vacuum_subtracted_profile(times, a, times, b);
  CHECK(sub[0][0] == 0.0);
  CHECK(sub[2][1] == 5.0);

  const auto zero = vacuum_subtracted_profile(times, a, times, a);
  for (const auto& prof : zero)
    for (double v : prof) CHECK(v == 0.0);

  std::vector<double> other_times = {0.0, 0.4, 1.0};
  CHECK_THROWS_AS(vacuum_subtracted_profile(times, a, other_times, b),
                  std::invalid_argument);
}

TEST_CASE("central field window") {
  CHECK(central_window_start(15, 12) == 2);
  CHECK(central_window_start(79, 12) == 34);
  CHECK(central_window_start(7, 7) == 0);
  CHECK_THROWS_AS(central_window_start(7, 8), std::invalid_argument);

  // 19-link string on 19 links: a 12-link central window sits inside it.
  const double u = std::sqrt(2.0 * std::numbers::pi / 3.0);
  FieldProfile prof(19, u);
  CHECK(central_field_sum(prof, 12) == doctest::Approx(12.0 * u));
  FieldProfile zeros(19, 0.0);
  CHECK(central_field_sum(zeros, 12) == 0.0);
}

TEST_CASE("site density tracks occupations") {
  const ModelParams p = params_for(3, 6);
  const auto basis = build_basis(p);
  const auto vac = dirac_vacuum(basis);
  const auto dens = site_density(basis, vac);
  for (int x = 1; x <= 6; ++x)
    CHECK(dens[x - 1] == doctest::Approx(x % 2 == 1 ? 1.0 : 0.0));
}
