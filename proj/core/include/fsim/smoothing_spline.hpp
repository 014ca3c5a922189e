#pragma once

#include <Eigen/Dense>

namespace fsim {

// Natural cubic smoothing spline on a fixed grid (Green & Silverman form):
// minimises ||y - f||^2 + lambda \int f''^2. The penalty matrix depends only
// on the grid, so one instance is reused across curves; its eigendecomposition
// makes each smooth + GCV search O(T^2).
class SplineSmoother {
 public:
  // grid strictly increasing, size >= 3
  explicit SplineSmoother(const Eigen::VectorXd& grid);

  // GCV-selected smoothing over a fixed log-spaced lambda ladder.
  // Optionally reports the chosen lambda.
  Eigen::VectorXd smooth(const Eigen::VectorXd& y, double* lambda_out = nullptr) const;

  Eigen::VectorXd smooth_fixed(const Eigen::VectorXd& y, double lambda) const;

  // First or second derivative at the grid points of the natural cubic
  // interpolant through (grid, values). order is 1 or 2.
  Eigen::VectorXd derivative(const Eigen::VectorXd& values, int order) const;

  const Eigen::VectorXd& grid() const { return grid_; }

 private:
  Eigen::VectorXd grid_;
  Eigen::MatrixXd evec_;   // eigenvectors of the penalty matrix
  Eigen::VectorXd eval_;   // eigenvalues (>= 0; two zeros span linear trends)
  Eigen::VectorXd lambda_ladder_;
};

}  // namespace fsim
