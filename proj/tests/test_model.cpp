#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "full_oracle.hpp"
#include "znqed/model.hpp"
#include "znqed/protocols.hpp"

using namespace znqed;

namespace {

double field_unit(int n) { return std::sqrt(2.0 * std::numbers::pi / n); }

ModelParams params_for(int n, int sites, double m, double g) {
  ModelParams p;
  p.n = n;
  p.sites = sites;
  p.m = m;
  p.g = g;
  return p;
}

}  // namespace

TEST_CASE("field eigenvalues match the spectral formula") {
  CHECK(field_eigenvalue(1, 3, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(field_eigenvalue(2, 3, 0.0) == doctest::Approx(1.44720).epsilon(1e-5));
  CHECK(field_eigenvalue(0, 3, 0.5) ==
        doctest::Approx(-0.72360).epsilon(1e-5));
  CHECK(field_eigenvalue(0, 2, 0.0) ==
        doctest::Approx(-0.5 * field_unit(2)));
  CHECK_THROWS_AS(field_eigenvalue(3, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(field_eigenvalue(-1, 3, 0.0), std::invalid_argument);

  // Centered-level addressing agrees with the raw index form.
  for (int n : {2, 3, 5, 7})
    for (int k = 0; k < n; ++k)
      CHECK(field_of_level(level_lo(n) + k, n, 0.25) ==
            doctest::Approx(field_eigenvalue(k, n, 0.25)).epsilon(1e-15));
}

TEST_CASE("level folding stays in the centered range") {
  for (int n : {2, 3, 5}) {
    const int lo = level_lo(n);
    for (long v = -30; v <= 30; ++v) {
      const int f = fold_level(v, n);
      CHECK(f >= lo);
      CHECK(f <= lo + n - 1);
      CHECK((v - f) % n == 0);
    }
  }
  CHECK(fold_level(1, 3) == 1);
  CHECK(fold_level(2, 3) == -1);  // wrap
  CHECK(fold_level(-2, 3) == 1);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(params_for(3, 5, 0.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(params_for(1, 4, 0.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(params_for(3, 26, 0.0, 1.0).validate(), ConfigError);
  ModelParams bad = params_for(3, 4, 0.0, 1.0);
  bad.boundary_level = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const ModelParams paper = ModelParams::paper_convention(3, 8, 0.5);
  CHECK(paper.g ==
        doctest::Approx(std::sqrt(3.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(paper.g_n() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("basis enumeration: counts, ordering, Gauss residuals") {
  const ModelParams p = params_for(3, 4, 0.5, 1.0);
  const auto fixed = build_basis(p, false);
  CHECK(fixed.dim() == 16);
  const auto all = build_basis(p, true);
  CHECK(all.dim() == 48);

  // Lexicographic (boundary, occupation) ordering and index inversion.
  for (std::size_t i = 0; i < all.dim(); ++i) {
    CHECK(all.index_of(all.occupation(i), all.boundary_level(i)) == i);
    if (i > 0) {
      const auto prev =
          std::pair{all.boundary_level(i - 1), all.occupation(i - 1)};
      const auto cur = std::pair{all.boundary_level(i), all.occupation(i)};
      CHECK(prev < cur);
    }
  }

  for (std::size_t i = 0; i < all.dim(); ++i)
    for (int r : gauss_residuals(all, i)) CHECK(r == 0);

  // Dirac occupation carries zero flux everywhere.
  const auto dirac_idx = fixed.index_of(dirac_occupation(4), 0);
  for (int level : fixed.link_levels(dirac_idx)) CHECK(level == 0);

  CHECK_THROWS_AS(build_basis(params_for(3, 5, 0, 1)), ConfigError);
  CHECK_THROWS_AS(fixed.index_of(0, 1), std::invalid_argument);
}

TEST_CASE("basis stores per-state flux implied by the charges") {
  // A hole on an odd site raises the flux, a particle on an even site
  // lowers it back.
  const ModelParams p = params_for(3, 8, 0.0, 1.0);
  const auto basis = build_basis(p);
  occ_t occ = dirac_occupation(8);
  occ ^= (occ_t{1} << 2) | (occ_t{1} << 5);  // empty site 3, fill site 6
  const auto levels = basis.link_levels(basis.index_of(occ, 0));
  const std::vector<int> expect = {0, 0, 1, 1, 1, 0, 0};
  for (std::size_t j = 0; j < expect.size(); ++j)
    CHECK(levels[j] == expect[j]);
}

TEST_CASE("diagonal Hamiltonian pieces") {
  ModelParams p = params_for(3, 4, 0.7, 1.3);
  p.t_hop = 0.0;
  const auto basis = build_basis(p);
  const auto H = build_hamiltonian(p, basis);
  CHECK(H.nnz() == basis.dim());  // diagonal only
  const auto dirac_idx = basis.index_of(dirac_occupation(4), 0);
  double diag = 0.0;
  for (std::size_t k = H.row_start[dirac_idx];
       k < H.row_start[dirac_idx + 1]; ++k)
    if (H.col[k] == dirac_idx) diag = H.val[k];
  // Two occupied odd sites at -m each, zero field energy.
  CHECK(diag == doctest::Approx(-2.0 * p.m).epsilon(1e-15));
}

TEST_CASE("two-site chain reduces to a two-level hopping problem") {
  ModelParams p = params_for(3, 2, 0.0, 0.0);
  p.t_hop = 0.8;
  const auto basis = build_basis(p);
  const auto H = build_hamiltonian(p, basis);
  const auto evals = oracle::sorted_eigenvalues(H);
  REQUIRE(evals.size() == 4);
  CHECK(evals.front() == doctest::Approx(-p.t_hop).epsilon(1e-12));
  CHECK(evals.back() == doctest::Approx(p.t_hop).epsilon(1e-12));
  CHECK(evals[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(evals[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Hamiltonian is symmetric as stored and conserves charge") {
  ModelParams p = params_for(3, 6, -0.4, 0.9);
  p.phi = 0.3;
  const auto basis = build_basis(p);
  const auto H = build_hamiltonian(p, basis);

  auto entry = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = H.row_start[i]; k < H.row_start[i + 1]; ++k)
      if (H.col[k] == j) return H.val[k];
    return 0.0;
  };
  for (std::size_t i = 0; i < H.dim; ++i)
    for (std::size_t k = H.row_start[i]; k < H.row_start[i + 1]; ++k)
      CHECK(H.val[k] == entry(H.col[k], i));

  // Off-diagonal elements only connect equal fermion numbers, and the
  // partner's stored flux differs by one cyclic unit on a single link.
  for (std::size_t i = 0; i < H.dim; ++i) {
    const int count_i = std::popcount(basis.occupation(i));
    const auto levels_i = basis.link_levels(i);
    for (std::size_t k = H.row_start[i]; k < H.row_start[i + 1]; ++k) {
      const std::size_t j = H.col[k];
      if (j == i) continue;
      CHECK(std::popcount(basis.occupation(j)) == count_i);
      const auto levels_j = basis.link_levels(j);
      int changed = 0;
      for (int link = 0; link < p.sites - 1; ++link)
        if (levels_i[link] != levels_j[link]) {
          ++changed;
          const int up = fold_level(levels_i[link] + 1, p.n);
          const int down = fold_level(levels_i[link] - 1, p.n);
          CHECK((levels_j[link] == up || levels_j[link] == down));
        }
      CHECK(changed == 1);
    }
  }
}

TEST_CASE("params/basis mismatch is rejected") {
  const ModelParams p = params_for(3, 4, 0.5, 1.0);
  const auto basis = build_basis(p);
  ModelParams other = p;
  other.m = 1.0;
  CHECK_THROWS_AS(build_hamiltonian(other, basis), std::logic_error);
}

TEST_CASE("wrap diagnostics count cyclic comparator events") {
  ModelParams p = params_for(3, 4, 0.0, 1.0);
  HamiltonianStats stats;
  build_hamiltonian(p, build_basis(p, true), &stats);
  CHECK(stats.hopping_entries > 0);
  CHECK(stats.wrap_entries > 0);
  CHECK(stats.wrap_entries < stats.hopping_entries);

  // n = 2 wraps on every second move.
  ModelParams p2 = params_for(2, 4, 0.0, 1.0);
  HamiltonianStats stats2;
  build_hamiltonian(p2, build_basis(p2, true), &stats2);
  CHECK(stats2.wrap_entries > 0);
}

TEST_CASE("constrained spectra match the projected full-space oracle") {
  for (int n : {2, 3, 5}) {
    for (int sites : {2, 4}) {
      ModelParams p = params_for(n, sites, -0.6, 1.1);
      p.phi = (n % 2 == 1) ? 0.2 : 0.0;

      const auto space = oracle::make_full_space(p);
      const auto triplets = oracle::full_hamiltonian(space);

      // Gauss closure: H never maps a physical state out of the subspace.
      const auto mask_all = oracle::gauss_mask(space, std::nullopt);
      CHECK(oracle::closure_violation(triplets, mask_all) == 0.0);

      // All boundary sectors at once.
      const auto all_basis = build_basis(p, true);
      const auto all_evals =
          oracle::sorted_eigenvalues(build_hamiltonian(p, all_basis));
      const auto restricted =
          oracle::restrict_to_mask(space, triplets, mask_all);
      const auto oracle_evals = oracle::sorted_eigenvalues(restricted);
      REQUIRE(all_evals.size() == oracle_evals.size());
      for (std::size_t i = 0; i < all_evals.size(); ++i)
        CHECK(all_evals[i] ==
              doctest::Approx(oracle_evals[i]).epsilon(1e-10));

      // Sector by sector.
      for (int b = level_lo(n); b <= level_lo(n) + n - 1; ++b) {
        ModelParams ps = p;
        ps.boundary_level = b;
        const auto basis = build_basis(ps, false);
        const auto evals =
            oracle::sorted_eigenvalues(build_hamiltonian(ps, basis));
        const auto mask = oracle::gauss_mask(space, b);
        const auto sector = oracle::restrict_to_mask(space, triplets, mask);
        REQUIRE(static_cast<std::size_t>(sector.rows()) == evals.size());
        const auto sector_evals = oracle::sorted_eigenvalues(sector);
        for (std::size_t i = 0; i < evals.size(); ++i)
          CHECK(evals[i] ==
                doctest::Approx(sector_evals[i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("full-space dimensions match the counting argument") {
  const ModelParams p = params_for(3, 2, 0.0, 1.0);
  const auto space = oracle::make_full_space(p);
  CHECK(space.dim == 12);  // 2^2 occupations x 3 levels on one link
  const auto mask0 = oracle::gauss_mask(space, 0);
  std::size_t count = 0;
  for (bool b : mask0) count += b;
  CHECK(count == 4);  // one sector holds every occupation exactly once
}

TEST_CASE("Dirac vacuum state") {
  const ModelParams p = params_for(3, 4, 0.5, 1.0);
  const auto basis = build_basis(p);
  const auto psi = dirac_vacuum(basis);
  CHECK(psi.recorded_norm == doctest::Approx(1.0));
  const auto idx = basis.index_of(0b0101, 0);  // sites 1 and 3 occupied
  CHECK(psi.amplitudes[idx] == cplx{1.0, 0.0});

  ModelParams even = params_for(2, 4, 0.5, 1.0);
  CHECK_THROWS_AS(dirac_vacuum(build_basis(even)), ConfigError);
}

TEST_CASE("string states carry the advertised flux") {
  CHECK(string_endpoints(80, 20) == std::pair{31, 50});
  CHECK(string_endpoints(16, 6) == std::pair{5, 10});

  // Same flux pattern as the production-size string: 19 interior links at
  // +1 between the endpoints.
  const ModelParams p = params_for(3, 20, 0.1, 0.1);
  const auto basis = build_basis(p);
  const auto [xl, xr] = string_endpoints(20, 20);
  CHECK(xl == 1);
  CHECK(xr == 20);
  const auto psi = string_state(basis, xl, xr);
  std::size_t support = 0, idx = 0;
  for (std::size_t i = 0; i < psi.dim(); ++i)
    if (psi.amplitudes[i] != cplx{0.0, 0.0}) {
      ++support;
      idx = i;
    }
  CHECK(support == 1);
  const auto levels = basis.link_levels(idx);
  for (int j = 0; j < 19; ++j) {
    CHECK(levels[j] == 1);
    CHECK(field_of_level(levels[j], 3, 0.0) ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi / 3.0)));
  }
  for (int r : gauss_residuals(basis, idx)) CHECK(r == 0);

  // Mirrored parities give the -1 string.
  const ModelParams p8 = params_for(3, 8, 0.1, 0.1);
  const auto basis8 = build_basis(p8);
  const auto psi_minus = string_state(basis8, 2, 5);
  for (std::size_t i = 0; i < psi_minus.dim(); ++i)
    if (psi_minus.amplitudes[i] != cplx{0.0, 0.0}) {
      const auto levels8 = basis8.link_levels(i);
      CHECK(levels8[1] == -1);
      CHECK(levels8[2] == -1);
      CHECK(levels8[3] == -1);
      CHECK(levels8[0] == 0);
    }

  CHECK_THROWS_AS(string_state(basis8, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(string_state(basis8, 6, 3), std::invalid_argument);
}
