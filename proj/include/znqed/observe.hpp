#pragma once

// Measurement of the quantities tracked during quenches: particle density,
// electric-field profiles, half-chain entanglement entropy, connected
// density correlations and the central-field sum used for string runs.
// All functions normalize the state internally, so unnormalized inputs
// (e.g. from RK4 runs) are handled.

#include <span>
#include <vector>

#include "znqed/model.hpp"

namespace znqed {

// Electric field per interior link (N-1 entries, physical units).
using FieldProfile = std::vector<double>;
// One real value per site (N entries).
using SiteSeries = std::vector<double>;

// Mean particle density rho = (1/N) sum_x <[1-(-1)^x]/2 + (-1)^x n_x>,
// zero on the Dirac sea and one on the maximal-meson state.
double particle_density(const GaugeInvariantBasis& basis,
                        const StateVector& psi);

// Per-site occupation expectation <n_x>.
SiteSeries site_density(const GaugeInvariantBasis& basis,
                        const StateVector& psi);

FieldProfile field_profile(const GaugeInvariantBasis& basis,
                           const StateVector& psi);
// Average of the field profile over the N-1 interior links.
double mean_field(const GaugeInvariantBasis& basis, const StateVector& psi);

// Von Neumann entropy of sites 1..cut (cut defaults to N/2), in bits by
// default or nats with base2 = false. The split is over the (boundary
// sector, occupation) labels; every link level is a function of the left
// labels, so the link crossing the cut rides along with the left block
// and contributes no dimensions of its own.
double half_chain_entropy(const GaugeInvariantBasis& basis,
                          const StateVector& psi, int cut = -1,
                          bool base2 = true);

// Connected density correlation G0(x) = <n_ref n_x> - <n_ref><n_x>
// (ref defaults to N/2).
SiteSeries connected_correlation(const GaugeInvariantBasis& basis,
                                 const StateVector& psi, int ref = -1);

// Per-time difference of two field-profile series sampled on identical
// time grids. Throws std::invalid_argument on misaligned inputs.
std::vector<FieldProfile> vacuum_subtracted_profile(
    std::span<const double> times_a, std::span<const FieldProfile> profiles_a,
    std::span<const double> times_b, std::span<const FieldProfile> profiles_b);

// Sum of n_links entries centered on the chain midpoint; for an even
// window on an odd link count the window starts at floor((L-n_links)/2)
// rounded up, i.e. index ceil((L-n_links)/2) with L = N-1.
double central_field_sum(const FieldProfile& profile, int n_links = 12);
// First (0-based) link index of that window.
int central_window_start(int total_links, int n_links);

}  // namespace znqed
