#include "fsim/smoothing_spline.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsim {

namespace {

// Solve a symmetric positive-definite tridiagonal system (Thomas algorithm).
// diag/off sized m and m-1; rhs sized m.
Eigen::VectorXd solve_tridiag(Eigen::VectorXd diag, const Eigen::VectorXd& off,
                              Eigen::VectorXd rhs) {
  const int m = static_cast<int>(diag.size());
  for (int i = 1; i < m; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  Eigen::VectorXd x(m);
  x[m - 1] = rhs[m - 1] / diag[m - 1];
  for (int i = m - 2; i >= 0; --i) x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

SplineSmoother::SplineSmoother(const Eigen::VectorXd& grid) : grid_(grid) {
  const int t = static_cast<int>(grid.size());
  if (t < 3) throw std::invalid_argument("SplineSmoother: grid needs >= 3 points");
  for (int i = 1; i < t; ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("SplineSmoother: grid must be strictly increasing");

  Eigen::VectorXd h(t - 1);
  for (int i = 0; i + 1 < t; ++i) h[i] = grid[i + 1] - grid[i];

  // Penalty K = D' W^{-1} D with D the second-difference map and W the
  // interior Gram matrix of linear B-splines (Green & Silverman).
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(t - 2, t);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(t - 2, t - 2);
  for (int i = 0; i < t - 2; ++i) {
    d(i, i) = 1.0 / h[i];
    d(i, i + 1) = -1.0 / h[i] - 1.0 / h[i + 1];
    d(i, i + 2) = 1.0 / h[i + 1];
    w(i, i) = (h[i] + h[i + 1]) / 3.0;
    if (i + 1 < t - 2) {
      w(i, i + 1) = h[i + 1] / 6.0;
      w(i + 1, i) = h[i + 1] / 6.0;
    }
  }
  Eigen::MatrixXd penalty = d.transpose() * w.llt().solve(d);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(penalty);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("SplineSmoother: eigendecomposition failed");
  evec_ = solver.eigenvectors();
  eval_ = solver.eigenvalues().cwiseMax(0.0);
  // The penalty annihilates exactly the constant and linear trends, so the
  // two smallest eigenvalues are true zeros; pinning them keeps those trends
  // unshrunk at any lambda instead of leaking solver round-off times lambda.
  eval_[0] = 0.0;
  eval_[1] = 0.0;

  double d_max = eval_.maxCoeff();
  double d_min_pos = d_max;
  for (int i = 0; i < eval_.size(); ++i)
    if (eval_[i] > 1e-10 * d_max && eval_[i] < d_min_pos) d_min_pos = eval_[i];
  if (!(d_max > 0.0)) { d_max = 1.0; d_min_pos = 1.0; }

  const double lo = std::log10(1.0 / d_max) - 2.0;
  const double hi = std::log10(1.0 / d_min_pos) + 2.0;
  const int ladder = 31;
  lambda_ladder_.resize(ladder);
  for (int i = 0; i < ladder; ++i)
    lambda_ladder_[i] = std::pow(10.0, lo + (hi - lo) * i / (ladder - 1.0));
}

Eigen::VectorXd SplineSmoother::smooth_fixed(const Eigen::VectorXd& y,
                                             double lambda) const {
  if (y.size() != grid_.size())
    throw std::invalid_argument("SplineSmoother: y size != grid size");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("SplineSmoother: lambda must be >= 0");
  const Eigen::VectorXd z = evec_.transpose() * y;
  const Eigen::VectorXd shrink = (1.0 + lambda * eval_.array()).inverse();
  return evec_ * (shrink.array() * z.array()).matrix();
}

Eigen::VectorXd SplineSmoother::smooth(const Eigen::VectorXd& y,
                                       double* lambda_out) const {
  if (y.size() != grid_.size())
    throw std::invalid_argument("SplineSmoother: y size != grid size");
  const int t = static_cast<int>(grid_.size());
  const Eigen::VectorXd z = evec_.transpose() * y;

  double best_gcv = std::numeric_limits<double>::infinity();
  double best_lambda = lambda_ladder_[0];
  for (int j = 0; j < lambda_ladder_.size(); ++j) {
    const double lambda = lambda_ladder_[j];
    const Eigen::ArrayXd a = (1.0 + lambda * eval_.array()).inverse();
    const double rss = (((1.0 - a) * z.array()).square()).sum();
    const double tr = a.sum();
    const double denom = t - tr;
    if (!(denom > 1e-12)) continue;
    const double gcv = t * rss / (denom * denom);
    if (gcv < best_gcv) {
      best_gcv = gcv;
      best_lambda = lambda;
    }
  }
  if (lambda_out) *lambda_out = best_lambda;
  return smooth_fixed(y, best_lambda);
}

Eigen::VectorXd SplineSmoother::derivative(const Eigen::VectorXd& values,
                                           int order) const {
  if (values.size() != grid_.size())
    throw std::invalid_argument("SplineSmoother: values size != grid size");
  if (order != 1 && order != 2)
    throw std::invalid_argument("SplineSmoother: derivative order must be 1 or 2");
  const int t = static_cast<int>(grid_.size());

  Eigen::VectorXd h(t - 1);
  for (int i = 0; i + 1 < t; ++i) h[i] = grid_[i + 1] - grid_[i];

  // Natural cubic interpolant: second derivatives M at the knots, M_0 = M_{T-1} = 0.
  Eigen::VectorXd m = Eigen::VectorXd::Zero(t);
  if (t > 2) {
    Eigen::VectorXd diag(t - 2), off(std::max(0, t - 3)), rhs(t - 2);
    for (int i = 1; i <= t - 2; ++i) {
      diag[i - 1] = (h[i - 1] + h[i]) / 3.0;
      rhs[i - 1] = (values[i + 1] - values[i]) / h[i] -
                   (values[i] - values[i - 1]) / h[i - 1];
      if (i <= t - 3) off[i - 1] = h[i] / 6.0;
    }
    m.segment(1, t - 2) = solve_tridiag(diag, off, rhs);
  }
  if (order == 2) return m;

  Eigen::VectorXd deriv(t);
  for (int i = 0; i + 1 < t; ++i)
    deriv[i] = (values[i + 1] - values[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
  deriv[t - 1] = (values[t - 1] - values[t - 2]) / h[t - 2] +
                 h[t - 2] * (m[t - 2] + 2.0 * m[t - 1]) / 6.0;
  return deriv;
}

}  // namespace fsim
