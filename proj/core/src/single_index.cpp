#include "fsim/single_index.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "fsim/errors.hpp"
#include "fsim/quadrature.hpp"

namespace fsim {

double SindexFit::index_of(const Eigen::VectorXd& curve) const {
  return inner_product(basis.grid, curve, beta_curve);
}

double SindexFit::z_of(const Eigen::VectorXd& curve) const {
  return (index_of(curve) - index_mean) / index_sd;
}

SindexFit estimate_index(const CurveSet& curves, const Eigen::VectorXd& y, int K) {
  return estimate_index(fpca(curves, K), curves, y, K);
}

SindexFit estimate_index(const FpcaBasis& basis, const CurveSet& curves,
                         const Eigen::VectorXd& y, int K) {
  curves.validate();
  if (curves.sparse())
    throw std::invalid_argument("estimate_index: curves must be dense");
  const int n = curves.n();
  if (y.size() != n) throw std::invalid_argument("estimate_index: y size != n");
  if (K < 1 || K > basis.eigenfunctions.rows())
    throw std::invalid_argument("estimate_index: K exceeds the basis size");
  if (n < K + 2)
    throw std::invalid_argument("estimate_index: needs n >= K + 2");

  // Least squares of y on an intercept plus the first K scores.
  Eigen::MatrixXd design(n, K + 1);
  design.col(0).setOnes();
  design.rightCols(K) = basis.scores.leftCols(K);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < K + 1)
    throw numeric_error("estimate_index: score regression is singular");
  const Eigen::VectorXd coef = qr.solve(y);

  SindexFit fit;
  fit.basis = basis;
  fit.basis.eigenfunctions = basis.eigenfunctions.topRows(K);
  fit.basis.eigenvalues = basis.eigenvalues.head(K);
  fit.basis.scores = basis.scores.leftCols(K);

  fit.beta_coeffs = coef.tail(K);
  fit.beta_curve = fit.basis.eigenfunctions.transpose() * fit.beta_coeffs;

  const double norm = l2_norm(basis.grid, fit.beta_curve);
  if (!(norm > 1e-12))
    throw numeric_error("estimate_index: fitted coefficient function has zero norm");
  fit.beta_coeffs /= norm;
  fit.beta_curve /= norm;

  // sign convention: largest-|coefficient| entry positive
  int arg = 0;
  fit.beta_coeffs.cwiseAbs().maxCoeff(&arg);
  if (fit.beta_coeffs[arg] < 0.0) {
    fit.beta_coeffs = -fit.beta_coeffs;
    fit.beta_curve = -fit.beta_curve;
  }

  const Eigen::VectorXd w = trapezoid_weights(basis.grid);
  fit.index = curves.values * (w.array() * fit.beta_curve.array()).matrix();

  fit.index_mean = fit.index.mean();
  const double var =
      (fit.index.array() - fit.index_mean).square().sum() / (n - 1.0);
  if (!(var > 1e-24))
    throw numeric_error("estimate_index: index is numerically constant");
  fit.index_sd = std::sqrt(var);
  return fit;
}

}  // namespace fsim
