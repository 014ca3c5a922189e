#include "fsim/semimetric.hpp"

#include <cmath>
#include <stdexcept>

#include "fsim/quadrature.hpp"

namespace fsim {

namespace {

Eigen::MatrixXd pairwise_score_distances(const Eigen::MatrixXd& scores) {
  const int n = static_cast<int>(scores.rows());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = (scores.row(i) - scores.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

Eigen::MatrixXd pairwise_l2_distances(const Eigen::VectorXd& grid,
                                      const Eigen::MatrixXd& rows) {
  const Eigen::VectorXd w = trapezoid_weights(grid);
  const int n = static_cast<int>(rows.rows());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Eigen::ArrayXd diff = (rows.row(i) - rows.row(j)).transpose().array();
      const double v = std::sqrt((w.array() * diff.square()).sum());
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

}  // namespace

Eigen::MatrixXd PcaSemimetric::train_distances() const {
  return pairwise_score_distances(basis.scores);
}

Eigen::VectorXd PcaSemimetric::distances_to(const Eigen::VectorXd& curve) const {
  const Eigen::VectorXd s = fpca_project(basis, curve);
  const int n = static_cast<int>(basis.scores.rows());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = (basis.scores.row(i).transpose() - s).norm();
  return d;
}

Eigen::MatrixXd DerivSemimetric::train_distances() const {
  return pairwise_l2_distances(grid, train_derivs);
}

Eigen::VectorXd DerivSemimetric::distances_to(const Eigen::VectorXd& curve) const {
  if (curve.size() != grid.size())
    throw std::invalid_argument("DerivSemimetric: curve size != grid size");
  const Eigen::VectorXd deriv = smoother.derivative(smoother.smooth(curve), order);
  const Eigen::VectorXd w = trapezoid_weights(grid);
  const int n = static_cast<int>(train_derivs.rows());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::ArrayXd diff = (train_derivs.row(i).transpose() - deriv).array();
    d[i] = std::sqrt((w.array() * diff.square()).sum());
  }
  return d;
}

PcaSemimetric make_pca_semimetric(const CurveSet& curves, int K) {
  return PcaSemimetric{fpca(curves, K)};
}

DerivSemimetric make_deriv_semimetric(const CurveSet& curves, int order) {
  curves.validate();
  if (curves.sparse())
    throw std::invalid_argument("semimetric: curves must be dense (impute_sparse first)");
  if (order != 1 && order != 2)
    throw std::invalid_argument("semimetric_deriv: order must be 1 or 2");
  if (curves.t() < order + 2)
    throw std::invalid_argument("semimetric_deriv: grid too short for this order");

  DerivSemimetric sm{order, curves.grid, Eigen::MatrixXd(curves.n(), curves.t()),
                     SplineSmoother(curves.grid)};
  for (int i = 0; i < curves.n(); ++i) {
    const Eigen::VectorXd smoothed = sm.smoother.smooth(curves.values.row(i).transpose());
    sm.train_derivs.row(i) = sm.smoother.derivative(smoothed, order).transpose();
  }
  return sm;
}

Eigen::MatrixXd semimetric_pca(const CurveSet& curves, int K) {
  return make_pca_semimetric(curves, K).train_distances();
}

Eigen::MatrixXd semimetric_deriv(const CurveSet& curves, int order) {
  return make_deriv_semimetric(curves, order).train_distances();
}

}  // namespace fsim
