#pragma once

#include <Eigen/Dense>

namespace fsim {

// Gaussian-kernel Nadaraya-Watson smoother on scalar covariates
// (an index or a semimetric distance). h > 0.
struct NwModel {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double h = 1.0;
};

struct NwEval {
  double value = 0.0;
  // true when every kernel weight underflowed to zero and the estimate fell
  // back to the nearest training point's response
  bool fallback = false;
};

// hat m(x0) = sum_i K((x0-x_i)/h) y_i / sum_i K((x0-x_i)/h), K = standard
// normal density (the 1/(h sqrt(2 pi)) factors cancel).
NwEval nw_estimate(const NwModel& model, double x0);

Eigen::VectorXd nw_fit(const NwModel& model, const Eigen::VectorXd& x0,
                       int* fallback_count = nullptr);

// Leave-one-out residuals y_i - hat m_{-i}(x_i); the weight on the held-out
// point is dropped from both sums. Falls back to the nearest other point's
// response when all remaining weights underflow.
Eigen::VectorXd nw_loo_residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 double h, int* fallback_count = nullptr);

}  // namespace fsim
