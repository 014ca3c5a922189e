#pragma once

#include <Eigen/Dense>

#include "fsim/curves.hpp"
#include "fsim/fpca.hpp"

namespace fsim {

// Estimated index structure of a functional single index model. The index
// coefficient function is expanded on the leading K FPCA eigenfunctions and
// fitted by least squares of y on the scores, then normalised to unit L2 norm
// with the largest-|coefficient| entry of beta_coeffs made positive
// (identifiability: scale and sign are not separately estimable).
//
// `index` keeps the raw inner products <X_i, beta_curve>. Kernel smoothing of
// y on the index operates on the standardised version
// z_i = (index_i - index_mean) / index_sd, so the bandwidth is expressed in
// index standard deviations; the same affine map is applied to new curves at
// prediction time.
struct SindexFit {
  Eigen::VectorXd beta_coeffs;  // K expansion coefficients
  Eigen::VectorXd beta_curve;   // coefficient function on the grid, ||.||_2 = 1
  Eigen::VectorXd index;        // n raw index values
  double index_mean = 0.0;
  double index_sd = 1.0;
  double h = 0.0;               // smoothing bandwidth (filled after estimation)
  FpcaBasis basis;

  Eigen::VectorXd z() const {
    return (index.array() - index_mean) / index_sd;
  }
  double index_of(const Eigen::VectorXd& curve) const;  // <curve, beta_curve>
  double z_of(const Eigen::VectorXd& curve) const;
};

// Least-squares index estimate on the first K FPCA components.
// Pre: curves dense, y.size() == n, n >= K + 2.
// Throws numeric_error when the score regression is singular or the fitted
// coefficient function has zero norm.
SindexFit estimate_index(const CurveSet& curves, const Eigen::VectorXd& y, int K);
SindexFit estimate_index(const FpcaBasis& basis, const CurveSet& curves,
                         const Eigen::VectorXd& y, int K);

}  // namespace fsim
