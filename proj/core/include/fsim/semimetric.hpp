#pragma once

#include <Eigen/Dense>

#include "fsim/curves.hpp"
#include "fsim/fpca.hpp"
#include "fsim/smoothing_spline.hpp"

namespace fsim {

// Projection semimetric: Euclidean distance between the first K functional
// PCA score vectors. Holds the training basis so new curves can be scored.
struct PcaSemimetric {
  FpcaBasis basis;  // truncated to K components

  Eigen::MatrixXd train_distances() const;
  // distances from one new curve to every training curve
  Eigen::VectorXd distances_to(const Eigen::VectorXd& curve) const;
};

// Derivative semimetric: L2 distance between order-th derivatives of
// GCV-smoothed curves, d(i,j) = sqrt(\int (x_i^{(q)} - x_j^{(q)})^2).
struct DerivSemimetric {
  int order = 1;
  Eigen::VectorXd grid;
  Eigen::MatrixXd train_derivs;  // n x T
  SplineSmoother smoother;

  Eigen::MatrixXd train_distances() const;
  Eigen::VectorXd distances_to(const Eigen::VectorXd& curve) const;
};

// curves dense; K in [1, min(n-1, T)]
PcaSemimetric make_pca_semimetric(const CurveSet& curves, int K);
// curves dense; order in {1, 2}; T >= order + 2
DerivSemimetric make_deriv_semimetric(const CurveSet& curves, int order);

// Convenience one-shot pairwise distance matrices (symmetric, zero diagonal).
Eigen::MatrixXd semimetric_pca(const CurveSet& curves, int K);
Eigen::MatrixXd semimetric_deriv(const CurveSet& curves, int order);

}  // namespace fsim
