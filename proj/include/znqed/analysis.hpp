#pragma once

// Post-processing of sampled series: peak extraction, ordinary least
// squares, damped Gauss-Newton curve fits, finite-size extrapolation in
// 1/N and the closed-form pair-production rate.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "znqed/errors.hpp"

namespace znqed {

struct FitResult {
  std::string model_name;
  std::vector<double> parameters;
  std::vector<double> std_errors;  // asymptotic, from the residual covariance
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> rss_trace;  // RSS after each accepted step
};

struct PeakRecord {
  double t_peak = 0.0;   // sub-sample refined position
  double value = 0.0;    // sampled series value at index
  std::size_t index = 0;
};

// Local maxima by discrete comparison with quadratic refinement of the
// peak position; candidates whose prominence (height above the higher of
// the two enclosing valleys) falls below min_prominence are dropped.
std::vector<PeakRecord> find_peaks(std::span<const double> xs,
                                   std::span<const double> ys,
                                   double min_prominence = 1e-3);

// Difference between the refined times of the second and first accepted
// maxima. Throws NumericalError when fewer than two peaks exist.
double oscillation_period(std::span<const double> xs,
                          std::span<const double> ys,
                          double min_prominence = 1e-3);

// Closed-form ordinary least squares y = a*x + b; parameters [a, b].
FitResult linear_fit(std::span<const double> xs, std::span<const double> ys);

enum class FitModel {
  lorentzian,        // A*g^2/(g^2 + (x-m0)^2) + c      params [m0, A, g, c]
  gaussian,          // A*exp(-(x-m0)^2/(2 s^2)) + c    params [m0, A, s, c]
  reciprocal_linear, // 1/(a*x + b)                     params [a, b]
  logarithmic,       // a*ln(x) + b                     params [a, b]
};

FitModel fit_model_from_string(const std::string& name);
std::string to_string(FitModel model);
int parameter_count(FitModel model);
double evaluate_model(FitModel model, std::span<const double> params,
                      double x);

// Data-driven starting point (peak position/height/half-width for the
// bump models, a linear fit of the transformed data otherwise).
std::vector<double> default_fit_init(FitModel model,
                                     std::span<const double> xs,
                                     std::span<const double> ys);

// Damped Gauss-Newton with Levenberg-style damping; stops when the
// relative parameter change drops below 1e-10 or after 200 iterations
// (non-convergence is flagged, the result is still returned).
FitResult curve_fit(FitModel model, std::span<const double> xs,
                    std::span<const double> ys, std::vector<double> init);

struct ExtrapolationResult {
  double rho_inf = 0.0;
  double beta = 0.0;
  double rho_inf_err = 0.0;
  double beta_err = 0.0;
  double rss = 0.0;
};

// Least squares of rho(N) = rho_inf - beta/N over (N, rho) samples.
ExtrapolationResult finite_size_extrapolation(
    std::span<const std::pair<int, double>> points);

// Closed-form production rate (m^2/2pi)*eps*exp(-pi/eps); eps must be
// positive.
double schwinger_rate(double epsilon, double mass);

// Slope of a linear fit of ys(ts) restricted to ts in [t_lo, t_hi].
FitResult rate_from_series(std::span<const double> ts,
                           std::span<const double> ys, double t_lo = 0.2,
                           double t_hi = 1.0);

}  // namespace znqed
