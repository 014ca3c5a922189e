#include "fsim/nadaraya_watson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsim {

namespace {
constexpr double kDenomFloor = 1e-300;

void check(const NwModel& model) {
  if (model.x.size() != model.y.size() || model.x.size() < 1)
    throw std::invalid_argument("nw: x and y must be nonempty and equally sized");
  if (!(model.h > 0.0)) throw std::invalid_argument("nw: h must be > 0");
}
}  // namespace

NwEval nw_estimate(const NwModel& model, double x0) {
  check(model);
  const Eigen::ArrayXd u = (model.x.array() - x0) / model.h;
  const Eigen::ArrayXd w = (-0.5 * u.square()).exp();
  const double denom = w.sum();
  if (denom < kDenomFloor) {
    int arg = 0;
    u.abs().minCoeff(&arg);
    return {model.y[arg], true};
  }
  return {(w * model.y.array()).sum() / denom, false};
}

Eigen::VectorXd nw_fit(const NwModel& model, const Eigen::VectorXd& x0,
                       int* fallback_count) {
  Eigen::VectorXd out(x0.size());
  int fallbacks = 0;
  for (int i = 0; i < x0.size(); ++i) {
    const NwEval e = nw_estimate(model, x0[i]);
    out[i] = e.value;
    fallbacks += e.fallback ? 1 : 0;
  }
  if (fallback_count) *fallback_count = fallbacks;
  return out;
}

Eigen::VectorXd nw_loo_residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 double h, int* fallback_count) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("nw_loo_residuals: needs >= 2 equally sized points");
  if (!(h > 0.0)) throw std::invalid_argument("nw_loo_residuals: h must be > 0");
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd res(n);
  int fallbacks = 0;
  for (int i = 0; i < n; ++i) {
    double num = 0.0, den = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int nearest = -1;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double u = (x[i] - x[j]) / h;
      const double w = std::exp(-0.5 * u * u);
      num += w * y[j];
      den += w;
      const double gap = std::abs(x[i] - x[j]);
      if (gap < best) {
        best = gap;
        nearest = j;
      }
    }
    if (den < kDenomFloor) {
      res[i] = y[i] - y[nearest];
      ++fallbacks;
    } else {
      res[i] = y[i] - num / den;
    }
  }
  if (fallback_count) *fallback_count = fallbacks;
  return res;
}

}  // namespace fsim
