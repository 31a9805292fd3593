#include "znqed/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace znqed {

namespace {

void check_series(std::span<const double> xs, std::span<const double> ys,
                  std::size_t min_points) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("x and y series differ in length");
  if (xs.size() < min_points)
    throw std::invalid_argument("too few samples for this operation");
}

// Height of ys[i] above the higher of the two valleys separating it from
// the nearest higher samples (or the series ends).
double prominence_at(std::span<const double> ys, std::size_t i) {
  double left_base = ys[i];
  for (std::size_t j = i; j-- > 0;) {
    if (ys[j] > ys[i]) break;
    left_base = std::min(left_base, ys[j]);
  }
  double right_base = ys[i];
  for (std::size_t j = i + 1; j < ys.size(); ++j) {
    if (ys[j] > ys[i]) break;
    right_base = std::min(right_base, ys[j]);
  }
  return ys[i] - std::max(left_base, right_base);
}

std::vector<double> model_gradient(FitModel model,
                                   std::span<const double> p, double x) {
  switch (model) {
    case FitModel::lorentzian: {
      const double m0 = p[0], A = p[1], g = p[2];
      const double d = x - m0;
      const double den = g * g + d * d;
      return {A * g * g * 2.0 * d / (den * den), g * g / den,
              A * 2.0 * g * d * d / (den * den), 1.0};
    }
    case FitModel::gaussian: {
      const double m0 = p[0], A = p[1], s = p[2];
      const double d = x - m0;
      const double e = std::exp(-d * d / (2.0 * s * s));
      return {A * e * d / (s * s), e, A * e * d * d / (s * s * s), 1.0};
    }
    case FitModel::reciprocal_linear: {
      const double den = p[0] * x + p[1];
      const double f = -1.0 / (den * den);
      return {f * x, f};
    }
    case FitModel::logarithmic:
      return {std::log(x), 1.0};
  }
  throw std::logic_error("unreachable fit model");
}

// Root of the sum of squared residuals partials -> parameter covariance.
std::vector<double> standard_errors(const Eigen::MatrixXd& jacobian,
                                    double rss) {
  const Eigen::Index n = jacobian.rows();
  const Eigen::Index k = jacobian.cols();
  std::vector<double> errs(k, 0.0);
  if (n <= k) return errs;
  const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
  const Eigen::MatrixXd cov =
      jtj.completeOrthogonalDecomposition().pseudoInverse() *
      (rss / static_cast<double>(n - k));
  for (Eigen::Index j = 0; j < k; ++j)
    errs[j] = cov(j, j) > 0.0 ? std::sqrt(cov(j, j)) : 0.0;
  return errs;
}

}  // namespace

std::vector<PeakRecord> find_peaks(std::span<const double> xs,
                                   std::span<const double> ys,
                                   double min_prominence) {
  check_series(xs, ys, 3);
  std::vector<PeakRecord> peaks;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    if (!(ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])) continue;
    if (prominence_at(ys, i) < min_prominence) continue;
    PeakRecord rec;
    rec.index = i;
    rec.value = ys[i];
    // Quadratic refinement of the position through the three samples
    // around the maximum.
    const double denom = ys[i - 1] - 2.0 * ys[i] + ys[i + 1];
    rec.t_peak = xs[i];
    if (denom < 0.0) {
      const double shift = 0.5 * (ys[i - 1] - ys[i + 1]) / denom;
      const double h = 0.5 * (xs[i + 1] - xs[i - 1]);
      rec.t_peak = xs[i] + shift * h;
    }
    peaks.push_back(rec);
  }
  return peaks;
}

double oscillation_period(std::span<const double> xs,
                          std::span<const double> ys, double min_prominence) {
  const auto peaks = find_peaks(xs, ys, min_prominence);
  if (peaks.size() < 2)
    throw NumericalError(
        "oscillation period needs at least two accepted maxima");
  return peaks[1].t_peak - peaks[0].t_peak;
}

FitResult linear_fit(std::span<const double> xs, std::span<const double> ys) {
  check_series(xs, ys, 2);
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0)
    throw NumericalError("singular normal equations in linear fit");
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;

  FitResult fit;
  fit.model_name = "linear";
  fit.parameters = {slope, intercept};
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (slope * xs[i] + intercept);
    fit.rss += r * r;
  }
  fit.converged = true;
  fit.iterations = 0;
  fit.std_errors.assign(2, 0.0);
  if (n > 2) {
    const double sigma2 = fit.rss / static_cast<double>(n - 2);
    fit.std_errors[0] = std::sqrt(sigma2 * n / det);
    fit.std_errors[1] = std::sqrt(sigma2 * sxx / det);
  }
  fit.rss_trace = {fit.rss};
  return fit;
}

FitModel fit_model_from_string(const std::string& name) {
  if (name == "lorentzian") return FitModel::lorentzian;
  if (name == "gaussian") return FitModel::gaussian;
  if (name == "reciprocal_linear") return FitModel::reciprocal_linear;
  if (name == "logarithmic") return FitModel::logarithmic;
  throw ConfigError("unknown fit model '" + name + "'");
}

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::lorentzian: return "lorentzian";
    case FitModel::gaussian: return "gaussian";
    case FitModel::reciprocal_linear: return "reciprocal_linear";
    case FitModel::logarithmic: return "logarithmic";
  }
  return "?";
}

int parameter_count(FitModel model) {
  switch (model) {
    case FitModel::lorentzian:
    case FitModel::gaussian: return 4;
    case FitModel::reciprocal_linear:
    case FitModel::logarithmic: return 2;
  }
  return 0;
}

double evaluate_model(FitModel model, std::span<const double> p, double x) {
  switch (model) {
    case FitModel::lorentzian: {
      const double d = x - p[0];
      return p[1] * p[2] * p[2] / (p[2] * p[2] + d * d) + p[3];
    }
    case FitModel::gaussian: {
      const double d = x - p[0];
      return p[1] * std::exp(-d * d / (2.0 * p[2] * p[2])) + p[3];
    }
    case FitModel::reciprocal_linear:
      return 1.0 / (p[0] * x + p[1]);
    case FitModel::logarithmic:
      return p[0] * std::log(x) + p[1];
  }
  throw std::logic_error("unreachable fit model");
}

std::vector<double> default_fit_init(FitModel model,
                                     std::span<const double> xs,
                                     std::span<const double> ys) {
  check_series(xs, ys, 2);
  switch (model) {
    case FitModel::lorentzian:
    case FitModel::gaussian: {
      // Seed from the empirical bump: location, height, half width at
      // half maximum, floor.
      std::size_t imax = 0;
      double ymin = ys[0];
      for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i] > ys[imax]) imax = i;
        ymin = std::min(ymin, ys[i]);
      }
      const double height = ys[imax] - ymin;
      const double half = ymin + 0.5 * height;
      double width = 0.0;
      for (std::size_t i = imax; i < ys.size(); ++i)
        if (ys[i] <= half) {
          width = xs[i] - xs[imax];
          break;
        }
      if (width == 0.0)
        for (std::size_t i = imax + 1; i-- > 0;)
          if (ys[i] <= half) {
            width = xs[imax] - xs[i];
            break;
          }
      if (width == 0.0)
        width = (xs.back() - xs.front()) / 4.0;
      return {xs[imax], height, width, ymin};
    }
    case FitModel::reciprocal_linear: {
      // Linear fit of 1/y.
      std::vector<double> inv(ys.size());
      for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i] == 0.0)
          throw std::invalid_argument(
              "reciprocal_linear seed requires nonzero samples");
        inv[i] = 1.0 / ys[i];
      }
      const FitResult lf = linear_fit(xs, inv);
      return {lf.parameters[0], lf.parameters[1]};
    }
    case FitModel::logarithmic: {
      std::vector<double> lx(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0))
          throw std::invalid_argument("logarithmic model needs x > 0");
        lx[i] = std::log(xs[i]);
      }
      const FitResult lf = linear_fit(lx, ys);
      return {lf.parameters[0], lf.parameters[1]};
    }
  }
  throw std::logic_error("unreachable fit model");
}

FitResult curve_fit(FitModel model, std::span<const double> xs,
                    std::span<const double> ys, std::vector<double> init) {
  const int k = parameter_count(model);
  check_series(xs, ys, static_cast<std::size_t>(k));
  if (static_cast<int>(init.size()) != k)
    throw std::invalid_argument("initial guess has wrong parameter count");
  for (double v : init)
    if (!std::isfinite(v))
      throw std::invalid_argument("initial guess must be finite");
  if (model == FitModel::logarithmic)
    for (double x : xs)
      if (!(x > 0.0))
        throw std::invalid_argument("logarithmic model needs x > 0");

  const std::size_t n = xs.size();
  auto rss_of = [&](const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - evaluate_model(model, p, xs[i]);
      acc += r * r;
    }
    return acc;
  };

  FitResult fit;
  fit.model_name = to_string(model);
  std::vector<double> p = std::move(init);
  double rss = rss_of(p);
  fit.rss_trace.push_back(rss);

  double lambda = 1e-3;
  Eigen::MatrixXd J(n, k);
  Eigen::VectorXd r(n);
  constexpr int kMaxIterations = 200;
  constexpr double kRelTol = 1e-10;

  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      r(i) = ys[i] - evaluate_model(model, p, xs[i]);
      const auto grad = model_gradient(model, p, xs[i]);
      for (int j = 0; j < k; ++j) J(i, j) = grad[j];
    }
    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd jtr = J.transpose() * r;

    bool accepted = false;
    double step_scale = 0.0;
    for (int attempt = 0; attempt < 25; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (int j = 0; j < k; ++j)
        damped(j, j) += lambda * std::max(jtj(j, j), 1e-12);
      const Eigen::VectorXd delta = damped.ldlt().solve(jtr);
      if (!delta.allFinite()) {
        lambda *= 3.0;
        continue;
      }
      std::vector<double> trial = p;
      for (int j = 0; j < k; ++j) trial[j] += delta(j);
      const double trial_rss = rss_of(trial);
      if (std::isfinite(trial_rss) && trial_rss <= rss) {
        double pnorm = 0.0, dnorm = 0.0;
        for (int j = 0; j < k; ++j) {
          pnorm += p[j] * p[j];
          dnorm += delta(j) * delta(j);
        }
        step_scale = std::sqrt(dnorm) /
                     std::max(std::sqrt(pnorm), 1e-30);
        p = std::move(trial);
        rss = trial_rss;
        fit.rss_trace.push_back(rss);
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        break;
      }
      lambda *= 3.0;
    }
    if (!accepted) break;  // damping exhausted; treat as stationary
    if (step_scale < kRelTol) {
      fit.converged = true;
      ++iter;
      break;
    }
  }

  fit.parameters = p;
  fit.rss = rss;
  fit.iterations = iter;
  if (!fit.converged && iter < kMaxIterations)
    fit.converged = true;  // stopped because no damped step improves
  for (std::size_t i = 0; i < n; ++i) {
    const auto grad = model_gradient(model, p, xs[i]);
    for (int j = 0; j < k; ++j) J(i, j) = grad[j];
  }
  fit.std_errors = standard_errors(J, rss);
  return fit;
}

ExtrapolationResult finite_size_extrapolation(
    std::span<const std::pair<int, double>> points) {
  if (points.size() < 2)
    throw std::invalid_argument("extrapolation needs at least two sizes");
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first <= 0)
      throw std::invalid_argument("chain sizes must be positive");
    xs[i] = 1.0 / points[i].first;
    ys[i] = points[i].second;
    for (std::size_t j = 0; j < i; ++j)
      if (points[j].first == points[i].first)
        throw NumericalError("duplicate chain sizes make the fit singular");
  }
  const FitResult lf = linear_fit(xs, ys);
  ExtrapolationResult out;
  out.rho_inf = lf.parameters[1];
  out.beta = -lf.parameters[0];
  out.rho_inf_err = lf.std_errors[1];
  out.beta_err = lf.std_errors[0];
  out.rss = lf.rss;
  return out;
}

double schwinger_rate(double epsilon, double mass) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("schwinger_rate needs epsilon > 0");
  return mass * mass / (2.0 * std::numbers::pi) * epsilon *
         std::exp(-std::numbers::pi / epsilon);
}

FitResult rate_from_series(std::span<const double> ts,
                           std::span<const double> ys, double t_lo,
                           double t_hi) {
  check_series(ts, ys, 2);
  if (!(t_lo < t_hi))
    throw std::invalid_argument("rate window is empty");
  std::vector<double> wx, wy;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= t_lo && ts[i] <= t_hi) {
      wx.push_back(ts[i]);
      wy.push_back(ys[i]);
    }
  if (wx.size() < 2)
    throw std::invalid_argument("rate window contains fewer than two samples");
  return linear_fit(wx, wy);
}

}  // namespace znqed
