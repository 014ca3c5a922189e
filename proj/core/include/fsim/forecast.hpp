#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fsim/error_model.hpp"
#include "fsim/nadaraya_watson.hpp"
#include "fsim/single_index.hpp"

namespace fsim {

// Point forecast for a new curve: standardise its index with the training
// constants and evaluate the full-sample kernel smoother (model.x must hold
// the standardised training index).
double point_forecast(const SindexFit& fit, const NwModel& model,
                      const Eigen::VectorXd& new_curve);

// Numerical CDF of a kernel-form error density: trapezoid accumulation of the
// pdf over a 1001-point uniform grid, normalised to end at exactly 1.
// Default grid: centre +- 5 * spread with centre = mean(centers) and
// spread = sqrt(var(centers) + b^2); fixed_grid forces [-5, 5].
struct ErrorCdf {
  Eigen::VectorXd grid;
  Eigen::VectorXd cdf;  // nondecreasing, cdf[0] = 0, cdf[last] = 1
};
ErrorCdf build_error_cdf(const KernelErrorDensity& d, bool fixed_grid = false);

// Quantile by CDF inversion: the grid point whose CDF value is closest to q
// (lower index on ties). q in [0, 1].
double error_cdf_quantile(const ErrorCdf& cdf, double q);
double error_cdf_quantile(const KernelErrorDensity& d, double q,
                          bool fixed_grid = false);

struct Interval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Two-sided prediction interval point + [q_{(1-level)/2}, q_{(1+level)/2}] of
// the error density. `marginal_scale` multiplies the quantiles; pass the
// AR marginal/innovation sd ratio (ar_marginal_sd_ratio) to turn innovation
// quantiles into marginal error quantiles. level in (0, 1).
Interval prediction_interval(double point, const KernelErrorDensity& d,
                             double level, bool fixed_grid = false,
                             double marginal_scale = 1.0);

// Fraction of y_true values falling inside [lo, hi] of their interval.
double empirical_coverage(const std::vector<Interval>& intervals,
                          const Eigen::VectorXd& y_true);

}  // namespace fsim
