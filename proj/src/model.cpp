#include "znqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace znqed {

namespace {

std::string describe(const char* what, long value) {
  return std::string(what) + " (got " + std::to_string(value) + ")";
}

}  // namespace

void ModelParams::validate() const {
  if (n < 2) throw ConfigError(describe("group order n must be >= 2", n));
  if (sites < 2 || sites % 2 != 0)
    throw ConfigError(describe("site count N must be even and >= 2", sites));
  if (sites > kMaxSites)
    throw ConfigError(describe(
        "site count exceeds the exact-state-vector limit kMaxSites", sites));
  const int lo = level_lo(n);
  if (boundary_level < lo || boundary_level > lo + n - 1)
    throw ConfigError(
        describe("boundary_level outside the centered level range",
                 boundary_level));
  if (!(std::isfinite(m) && std::isfinite(g) && std::isfinite(t_hop) &&
        std::isfinite(phi)))
    throw ConfigError("model parameters must be finite");
}

ModelParams ModelParams::paper_convention(int n, int sites, double m) {
  ModelParams p;
  p.n = n;
  p.sites = sites;
  p.m = m;
  p.g = std::sqrt(static_cast<double>(n) / std::numbers::pi);
  p.validate();
  return p;
}

double ModelParams::field_unit() const {
  return std::sqrt(2.0 * std::numbers::pi / n);
}

double ModelParams::g_n() const { return g * field_unit(); }

double critical_field(const ModelParams& p) { return p.m * p.m / p.g; }

double critical_field_rescaled(const ModelParams& p) {
  return p.m * p.m / p.g_n();
}

double phi_for_epsilon(const ModelParams& p, double epsilon) {
  return epsilon * critical_field(p) / p.field_unit();
}

int level_lo(int n) { return -(n / 2); }

int fold_level(long level, int n) {
  const int lo = level_lo(n);
  long r = (level - lo) % n;
  if (r < 0) r += n;
  return static_cast<int>(lo + r);
}

double field_eigenvalue(int k, int n, double phi) {
  if (k < 0 || k >= n)
    throw std::invalid_argument("field eigenstate index k outside 0..n-1");
  return std::sqrt(2.0 * std::numbers::pi / n) *
         (k - 0.5 * (n - 1) + phi);
}

double field_of_level(int level, int n, double phi) {
  return field_eigenvalue(level - level_lo(n), n, phi);
}

int site_charge(int site, int occupied) {
  return (site % 2 == 1) ? (1 - occupied) : -occupied;
}

occ_t dirac_occupation(int sites) {
  occ_t occ = 0;
  for (int x = 1; x <= sites; x += 2) occ |= occ_t{1} << (x - 1);
  return occ;
}

int GaugeInvariantBasis::boundary_level(std::size_t idx) const {
  if (!all_sectors_) return params_.boundary_level;
  return level_lo(params_.n) +
         static_cast<int>(idx >> params_.sites);
}

std::size_t GaugeInvariantBasis::index_of(occ_t occ, int boundary_level) const {
  if (occ > occ_mask_)
    throw std::invalid_argument("occupation word has more bits than sites");
  if (!all_sectors_) {
    if (boundary_level != params_.boundary_level)
      throw std::invalid_argument("boundary sector not part of this basis");
    return occ;
  }
  const int lo = level_lo(params_.n);
  if (boundary_level < lo || boundary_level > lo + params_.n - 1)
    throw std::invalid_argument("boundary level outside the centered range");
  return (static_cast<std::size_t>(boundary_level - lo) << params_.sites) |
         occ;
}

GaugeInvariantBasis build_basis(const ModelParams& params, bool all_sectors) {
  params.validate();
  GaugeInvariantBasis basis;
  basis.params_ = params;
  basis.all_sectors_ = all_sectors;
  const int N = params.sites;
  const std::size_t per_sector = std::size_t{1} << N;
  const std::size_t sectors = all_sectors ? params.n : 1;
  basis.dim_ = per_sector * sectors;
  basis.occ_mask_ = per_sector - 1;
  basis.link_levels_.resize(basis.dim_ * static_cast<std::size_t>(N - 1));
  basis.tag_ = BasisTag{params.n, params.sites, all_sectors,
                        all_sectors ? 0 : params.boundary_level};

  const int lo = level_lo(params.n);
  std::int8_t* out = basis.link_levels_.data();
  for (std::size_t s = 0; s < sectors; ++s) {
    const int b = all_sectors ? lo + static_cast<int>(s)
                              : params.boundary_level;
    for (occ_t occ = 0; occ < per_sector; ++occ) {
      int level = b;
      for (int x = 1; x < N; ++x) {
        const int occupied = (occ >> (x - 1)) & 1;
        level = fold_level(level + site_charge(x, occupied), params.n);
        *out++ = static_cast<std::int8_t>(level);
      }
    }
  }
  return basis;
}

void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  for (std::size_t i = 0; i < dim; ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
      acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

SparseOperator SparseOperator::scaled(double factor) const {
  SparseOperator out = *this;
  for (double& v : out.val) v *= factor;
  return out;
}

double StateVector::refresh_norm() {
  double acc = 0.0;
  for (const cplx& a : amplitudes) acc += std::norm(a);
  recorded_norm = std::sqrt(acc);
  return recorded_norm;
}

void StateVector::normalize() {
  const double nrm = refresh_norm();
  if (nrm == 0.0) throw NumericalError("cannot normalize a zero state");
  for (cplx& a : amplitudes) a /= nrm;
  recorded_norm = 1.0;
}

SparseOperator build_hamiltonian(const ModelParams& params,
                                 const GaugeInvariantBasis& basis,
                                 HamiltonianStats* stats) {
  if (!(params == basis.params()))
    throw std::logic_error("build_hamiltonian: params do not match basis");

  const int N = params.sites;
  const std::size_t dim = basis.dim();
  const bool with_hopping = params.t_hop != 0.0;
  const int hi = level_lo(params.n) + params.n - 1;

  SparseOperator H;
  H.dim = dim;
  H.basis_tag = basis.tag();
  H.row_start.assign(dim + 1, 0);

  // Row sizes: the diagonal plus one entry per movable adjacent pair.
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t count = 1;
    if (with_hopping) {
      const occ_t occ = basis.occupation(i);
      for (int x = 1; x < N; ++x)
        if (((occ >> (x - 1)) & 1) != ((occ >> x) & 1)) ++count;
    }
    H.row_start[i + 1] = H.row_start[i] + count;
  }
  H.col.resize(H.row_start[dim]);
  H.val.resize(H.row_start[dim]);

  HamiltonianStats local{};
  std::vector<std::pair<std::uint32_t, double>> row;
  row.reserve(static_cast<std::size_t>(N) + 1);
  for (std::size_t i = 0; i < dim; ++i) {
    const occ_t occ = basis.occupation(i);
    const int b = basis.boundary_level(i);
    const auto levels = basis.link_levels(i);

    double diag = 0.0;
    for (int x = 1; x <= N; ++x) {
      const int occupied = (occ >> (x - 1)) & 1;
      diag += params.m * ((x % 2 == 0) ? 1.0 : -1.0) * occupied;
    }
    const double half_g2 = 0.5 * params.g * params.g;
    for (int j = 0; j < N - 1; ++j) {
      const double e = field_of_level(levels[j], params.n, params.phi);
      diag += half_g2 * e * e;
    }

    row.clear();
    row.emplace_back(static_cast<std::uint32_t>(i), diag);
    if (with_hopping) {
      for (int x = 1; x < N; ++x) {
        const int left = (occ >> (x - 1)) & 1;
        const int right = (occ >> x) & 1;
        if (left == right) continue;
        const occ_t partner =
            occ ^ ((occ_t{1} << (x - 1)) | (occ_t{1} << x));
        const std::size_t j = basis.index_of(partner, b);
        // The Jordan-Wigner string cancels between adjacent sites, so the
        // hopping element is -t_hop with no fermionic sign.
        row.emplace_back(static_cast<std::uint32_t>(j), -params.t_hop);
        ++local.hopping_entries;
        const int level = levels[x - 1];
        if ((left == 1 && level == hi) ||
            (right == 1 && level == level_lo(params.n)))
          ++local.wrap_entries;
      }
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t k = H.row_start[i];
    for (const auto& [c, v] : row) {
      H.col[k] = c;
      H.val[k] = v;
      ++k;
    }
  }
  if (stats) *stats = local;
  return H;
}

StateVector dirac_vacuum(const GaugeInvariantBasis& basis) {
  const ModelParams& p = basis.params();
  if (p.n % 2 == 0)
    throw ConfigError(
        "dirac_vacuum requires odd n: even-order groups have no "
        "zero-field level");
  std::size_t idx;
  try {
    idx = basis.index_of(dirac_occupation(p.sites), 0);
  } catch (const std::invalid_argument&) {
    throw ConfigError("dirac_vacuum: basis lacks the boundary-level-0 sector");
  }
  StateVector psi;
  psi.amplitudes.assign(basis.dim(), cplx{0.0, 0.0});
  psi.amplitudes[idx] = cplx{1.0, 0.0};
  psi.basis_tag = basis.tag();
  psi.recorded_norm = 1.0;
  return psi;
}

StateVector string_state(const GaugeInvariantBasis& basis, int x_left,
                         int x_right) {
  const ModelParams& p = basis.params();
  if (p.n % 2 == 0)
    throw ConfigError("string_state requires odd n (zero-field background)");
  if (x_left < 1 || x_right > p.sites || x_left >= x_right)
    throw std::invalid_argument("string endpoints out of order or range");
  const bool plus_string = (x_left % 2 == 1) && (x_right % 2 == 0);
  const bool minus_string = (x_left % 2 == 0) && (x_right % 2 == 1);
  if (!plus_string && !minus_string)
    throw std::invalid_argument(
        "string endpoints need parities (odd,even) or (even,odd)");

  occ_t occ = dirac_occupation(p.sites);
  occ ^= (occ_t{1} << (x_left - 1)) | (occ_t{1} << (x_right - 1));
  std::size_t idx;
  try {
    idx = basis.index_of(occ, 0);
  } catch (const std::invalid_argument&) {
    throw ConfigError("string_state: basis lacks the boundary-level-0 sector");
  }
  StateVector psi;
  psi.amplitudes.assign(basis.dim(), cplx{0.0, 0.0});
  psi.amplitudes[idx] = cplx{1.0, 0.0};
  psi.basis_tag = basis.tag();
  psi.recorded_norm = 1.0;
  return psi;
}

std::vector<int> gauss_residuals(const GaugeInvariantBasis& basis,
                                 std::size_t idx) {
  const ModelParams& p = basis.params();
  const occ_t occ = basis.occupation(idx);
  const auto levels = basis.link_levels(idx);
  std::vector<int> res(p.sites - 1, 0);
  int prev = basis.boundary_level(idx);
  for (int x = 1; x < p.sites; ++x) {
    const int occupied = (occ >> (x - 1)) & 1;
    const int expect = fold_level(prev + site_charge(x, occupied), p.n);
    res[x - 1] = fold_level(levels[x - 1] - expect, p.n);
    prev = levels[x - 1];
  }
  return res;
}

}  // namespace znqed
