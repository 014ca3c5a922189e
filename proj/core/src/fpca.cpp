#include "fsim/fpca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

#include "fsim/quadrature.hpp"

namespace fsim {

FpcaBasis fpca(const CurveSet& curves, int K) {
  curves.validate();
  if (curves.sparse())
    throw std::invalid_argument("fpca: curves must be dense (impute_sparse first)");
  const int n = curves.n();
  const int t = curves.t();
  const int k_max = std::min(n - 1, t);
  if (K < 1 || K > k_max)
    throw std::invalid_argument("fpca: K must lie in [1, min(n-1, T)]");

  FpcaBasis basis;
  basis.grid = curves.grid;
  basis.mean = curves.values.colwise().mean();

  Eigen::MatrixXd centered = curves.values.rowwise() - basis.mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);

  const Eigen::VectorXd w = trapezoid_weights(curves.grid);
  basis.total_variance = (w.array() * cov.diagonal().array()).sum();

  const Eigen::VectorXd ws = w.array().sqrt();
  Eigen::MatrixXd weighted = ws.asDiagonal() * cov * ws.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(weighted);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("fpca: eigendecomposition failed");

  // SelfAdjointEigenSolver sorts ascending; take the top K in descending order.
  basis.eigenvalues.resize(K);
  basis.eigenfunctions.resize(K, t);
  for (int k = 0; k < K; ++k) {
    const int src = t - 1 - k;
    basis.eigenvalues[k] = std::max(solver.eigenvalues()[src], 0.0);
    Eigen::VectorXd phi = solver.eigenvectors().col(src).array() / ws.array();
    // deterministic sign: largest-|value| coordinate positive
    int arg = 0;
    phi.cwiseAbs().maxCoeff(&arg);
    if (phi[arg] < 0.0) phi = -phi;
    basis.eigenfunctions.row(k) = phi.transpose();
  }

  basis.scores.resize(n, K);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd wphi = w.array() * basis.eigenfunctions.row(k).transpose().array();
    basis.scores.col(k) = centered * wphi;
  }
  return basis;
}

Eigen::MatrixXd fpca_reconstruct(const FpcaBasis& basis) {
  Eigen::MatrixXd recon = basis.scores * basis.eigenfunctions;
  recon.rowwise() += basis.mean.transpose();
  return recon;
}

Eigen::VectorXd fpca_project(const FpcaBasis& basis, const Eigen::VectorXd& curve) {
  if (curve.size() != basis.grid.size())
    throw std::invalid_argument("fpca_project: curve size != grid size");
  const Eigen::VectorXd w = trapezoid_weights(basis.grid);
  const Eigen::VectorXd centered = curve - basis.mean;
  const int K = static_cast<int>(basis.eigenfunctions.rows());
  Eigen::VectorXd scores(K);
  for (int k = 0; k < K; ++k)
    scores[k] = (w.array() * centered.array() *
                 basis.eigenfunctions.row(k).transpose().array())
                    .sum();
  return scores;
}

int choose_k(const Eigen::VectorXd& eigenvalues, double total_variance,
             double threshold, int cap) {
  if (eigenvalues.size() < 1)
    throw std::invalid_argument("choose_k: needs at least one eigenvalue");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("choose_k: threshold must lie in (0, 1]");
  if (cap < 1) throw std::invalid_argument("choose_k: cap must be >= 1");
  const int limit = std::min<int>(cap, static_cast<int>(eigenvalues.size()));
  if (!(total_variance > 0.0)) return 1;
  // Components with numerically null eigenvalues add no information and make
  // downstream score regressions singular; never select past them.
  const double floor = 1e-9 * std::max(eigenvalues[0], 0.0);
  double cum = 0.0;
  int k = 0;
  for (; k < limit; ++k) {
    if (k > 0 && !(eigenvalues[k] > floor)) break;
    cum += eigenvalues[k];
    if (cum / total_variance >= threshold) return k + 1;
  }
  return std::max(k, 1);
}

}  // namespace fsim
