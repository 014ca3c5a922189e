#include "fsim/forecast.hpp"

#include <cmath>
#include <stdexcept>

#include "fsim/quadrature.hpp"

namespace fsim {

double point_forecast(const SindexFit& fit, const NwModel& model,
                      const Eigen::VectorXd& new_curve) {
  return nw_estimate(model, fit.z_of(new_curve)).value;
}

ErrorCdf build_error_cdf(const KernelErrorDensity& d, bool fixed_grid) {
  const int m = static_cast<int>(d.centers.size());
  if (m < 1) throw std::invalid_argument("build_error_cdf: no centers");
  if (!(d.b > 0.0)) throw std::invalid_argument("build_error_cdf: b must be > 0");

  double lo = -5.0, hi = 5.0;
  if (!fixed_grid) {
    const double centre = d.centers.mean();
    const double var = (d.centers.array() - centre).square().sum() / m;
    const double spread = std::sqrt(var + d.b * d.b);
    lo = centre - 5.0 * spread;
    hi = centre + 5.0 * spread;
  }

  ErrorCdf out;
  out.grid = uniform_grid(lo, hi, 1001);
  const Eigen::VectorXd pdf = error_density_pdf(d, out.grid);
  out.cdf.resize(out.grid.size());
  out.cdf[0] = 0.0;
  for (int i = 1; i < out.grid.size(); ++i)
    out.cdf[i] = out.cdf[i - 1] +
                 0.5 * (pdf[i] + pdf[i - 1]) * (out.grid[i] - out.grid[i - 1]);
  const double total = out.cdf[out.cdf.size() - 1];
  if (total > 0.0) out.cdf /= total;
  out.cdf[out.cdf.size() - 1] = 1.0;
  return out;
}

double error_cdf_quantile(const ErrorCdf& cdf, double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("error_cdf_quantile: q must lie in [0, 1]");
  int best = 0;
  double best_gap = std::abs(cdf.cdf[0] - q);
  for (int i = 1; i < cdf.cdf.size(); ++i) {
    const double gap = std::abs(cdf.cdf[i] - q);
    if (gap < best_gap) {  // strict: ties keep the lower index
      best_gap = gap;
      best = i;
    }
  }
  return cdf.grid[best];
}

double error_cdf_quantile(const KernelErrorDensity& d, double q, bool fixed_grid) {
  return error_cdf_quantile(build_error_cdf(d, fixed_grid), q);
}

Interval prediction_interval(double point, const KernelErrorDensity& d,
                             double level, bool fixed_grid,
                             double marginal_scale) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("prediction_interval: level must lie in (0, 1)");
  if (!(marginal_scale > 0.0))
    throw std::invalid_argument("prediction_interval: marginal_scale must be > 0");
  const ErrorCdf cdf = build_error_cdf(d, fixed_grid);
  const double alpha = 0.5 * (1.0 - level);
  Interval out;
  out.point = point;
  out.lo = point + marginal_scale * error_cdf_quantile(cdf, alpha);
  out.hi = point + marginal_scale * error_cdf_quantile(cdf, 1.0 - alpha);
  return out;
}

double empirical_coverage(const std::vector<Interval>& intervals,
                          const Eigen::VectorXd& y_true) {
  if (static_cast<int>(intervals.size()) != y_true.size() || intervals.empty())
    throw std::invalid_argument("empirical_coverage: size mismatch or empty input");
  int covered = 0;
  for (int i = 0; i < y_true.size(); ++i)
    if (y_true[i] >= intervals[i].lo && y_true[i] <= intervals[i].hi) ++covered;
  return static_cast<double>(covered) / static_cast<double>(intervals.size());
}

}  // namespace fsim
