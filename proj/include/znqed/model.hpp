#pragma once

// Z_n lattice gauge theory for 1+1d QED with staggered fermions: the
// gauge-constrained Hilbert space, the Hamiltonian, and the product
// initial states (Dirac sea vacuum, flux string).
//
// Conventions used throughout:
//   * Sites are numbered x = 1..N (N even); occupation bit (x-1) of an
//     occ_t word is site x. Odd sites carry mass -m, even sites +m.
//   * Interior links (x, x+1), x = 1..N-1, hold an integer field level
//     in the centered range {level_lo(n), ..., level_lo(n) + n - 1};
//     the electric field on a link at level l is sqrt(2*pi/n)*(l + phi)
//     for odd n (a half-integer offset appears for even n).
//   * Gauss's law fixes every link from the virtual boundary link on
//     the left of site 1: level(x,x+1) - level(x-1,x) = site_charge(x)
//     modulo n, where a hole on an odd site carries charge +1 and a
//     particle on an even site carries charge -1. With this orientation
//     a particle moved rightward off the Dirac sea leaves a link at
//     +sqrt(2*pi/n), and the comparator in the hopping term raises the
//     intermediate level by one (cyclically).

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "znqed/errors.hpp"

namespace znqed {

using cplx = std::complex<double>;

// Occupation pattern of the chain: bit (x-1) holds site x.
using occ_t = std::uint32_t;

// Hard cap on chain length for exact state vectors (memory grows as 2^N).
inline constexpr int kMaxSites = 24;

// Continuum-limit critical mass, used only as a reference point when
// scanning quench masses.
inline constexpr double kCriticalMassReference = -0.33;

struct ModelParams {
  int n = 3;               // gauge group order Z_n
  int sites = 8;           // chain length N (even)
  double m = 0.0;          // staggered mass
  double g = 1.0;          // gauge coupling
  double t_hop = 1.0;      // hopping scale
  double phi = 0.0;        // background-field angle
  int boundary_level = 0;  // field level on the virtual link left of site 1

  // Throws ConfigError on violated invariants (N even >= 2, n >= 2,
  // boundary level inside the centered range, N <= kMaxSites).
  void validate() const;

  // Lattice-unit convention g = sqrt(n/pi).
  static ModelParams paper_convention(int n, int sites, double m);

  double field_unit() const;  // sqrt(2*pi/n)
  double g_n() const;         // rescaled coupling g*sqrt(2*pi/n)

  bool operator==(const ModelParams&) const = default;
};

// Critical external field E_c = m^2/g and the background angle realizing a
// uniform field of scaled strength eps = E_0/E_c. The lattice g enters E_c;
// critical_field_rescaled() gives the g_n variant for comparison.
double critical_field(const ModelParams& p);
double critical_field_rescaled(const ModelParams& p);
double phi_for_epsilon(const ModelParams& p, double epsilon);

// Centered integer level range {lo, ..., lo + n - 1} of Z_n.
int level_lo(int n);
// Folds an arbitrary integer into the centered range (mod n).
int fold_level(long level, int n);

// Electric-field eigenvalue sqrt(2*pi/n)*(k - (n-1)/2 + phi) of the k-th
// field eigenstate, k = 0..n-1. Throws std::invalid_argument for k out of
// range.
double field_eigenvalue(int k, int n, double phi);
// Same value addressed by centered level.
double field_of_level(int level, int n, double phi);

// Charge seen by Gauss's law: +1 for a hole on an odd site, -1 for a
// particle on an even site, 0 otherwise.
int site_charge(int site, int occupied);

// Occupation word of the Dirac sea (odd sites filled, even empty).
occ_t dirac_occupation(int sites);

// Identity of a basis; operators and states may only be combined when
// their tags agree.
struct BasisTag {
  std::int32_t n = 0;
  std::int32_t sites = 0;
  bool all_sectors = false;
  std::int32_t sector = 0;  // boundary level; meaningful when !all_sectors

  bool operator==(const BasisTag&) const = default;
};

// Enumeration of the physical (Gauss-law satisfying) states. Every
// occupation pattern admits exactly one link assignment per boundary
// sector, so the dimension is 2^N for a fixed sector and n*2^N with all
// sectors. States are ordered lexicographically in (boundary level,
// occupation as an integer).
class GaugeInvariantBasis {
 public:
  std::size_t dim() const { return dim_; }
  const ModelParams& params() const { return params_; }
  bool all_sectors() const { return all_sectors_; }
  const BasisTag& tag() const { return tag_; }

  occ_t occupation(std::size_t idx) const {
    return static_cast<occ_t>(idx & occ_mask_);
  }
  int boundary_level(std::size_t idx) const;
  std::span<const std::int8_t> link_levels(std::size_t idx) const {
    const std::size_t w = static_cast<std::size_t>(params_.sites - 1);
    return {link_levels_.data() + idx * w, w};
  }
  // Index of (occupation, boundary level); throws std::invalid_argument if
  // the sector is not part of the basis.
  std::size_t index_of(occ_t occ, int boundary_level) const;

 private:
  friend GaugeInvariantBasis build_basis(const ModelParams&, bool);
  GaugeInvariantBasis() = default;

  ModelParams params_;
  bool all_sectors_ = false;
  std::size_t dim_ = 0;
  std::size_t occ_mask_ = 0;
  std::vector<std::int8_t> link_levels_;  // dim x (sites-1), row-major
  BasisTag tag_;
};

GaugeInvariantBasis build_basis(const ModelParams& params,
                                bool all_sectors = false);

// Hermitian operator in CSR form. All Hamiltonians and diagonal
// observables of this model are real symmetric.
struct SparseOperator {
  std::size_t dim = 0;
  std::vector<std::size_t> row_start;  // dim + 1 entries
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  BasisTag basis_tag;

  std::size_t nnz() const { return col.size(); }
  // y = A x (rows are independent; no aliasing allowed).
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  SparseOperator scaled(double factor) const;
};

struct StateVector {
  std::vector<cplx> amplitudes;
  BasisTag basis_tag;
  double recorded_norm = 0.0;

  std::size_t dim() const { return amplitudes.size(); }
  // Recomputes the Euclidean norm, stores and returns it.
  double refresh_norm();
  void normalize();
};

struct HamiltonianStats {
  std::size_t hopping_entries = 0;  // off-diagonal nonzeros
  // Hopping entries whose comparator shift wraps around the cyclic level
  // range; a nonzero count marks matrix elements on which the mod-n
  // constraint differs from exact integer flux conservation.
  std::size_t wrap_entries = 0;
};

// H = -t_hop * sum_x (psi^+_{x+1} U psi_x + h.c.)
//     + m * sum_x (-1)^x psi^+_x psi_x + (g^2/2) * sum_links E^2.
// Throws std::logic_error if params do not match the basis.
SparseOperator build_hamiltonian(const ModelParams& params,
                                 const GaugeInvariantBasis& basis,
                                 HamiltonianStats* stats = nullptr);

// Unit vector on the Dirac sea configuration (boundary sector 0, all links
// at level 0). Requires odd n: an even-order group has no zero-field level.
StateVector dirac_vacuum(const GaugeInvariantBasis& basis);

// Product string state: a hole at odd x_left and a particle at even x_right
// put the links strictly between them at level +1 (field +sqrt(2*pi/n)).
// Swapped parities (even x_left occupied, odd x_right emptied) give the
// mirrored -1 string.
StateVector string_state(const GaugeInvariantBasis& basis, int x_left,
                         int x_right);

// Per-site Gauss residuals (mod n) of a stored basis state; identically
// zero by construction, exposed for verification.
std::vector<int> gauss_residuals(const GaugeInvariantBasis& basis,
                                 std::size_t idx);

}  // namespace znqed
