#pragma once

#include <Eigen/Dense>

#include "fsim/curves.hpp"

namespace fsim {

// Functional PCA of a dense curve sample, discretised with trapezoid
// quadrature: eigenpairs of the weighted covariance B = W^{1/2} C W^{1/2}
// with C = (1/n) Xc' Xc, mapped back by phi = W^{-1/2} u. Eigenfunctions are
// orthonormal in the quadrature inner product; signs are fixed by making the
// largest-|value| coordinate of each eigenfunction positive.
struct FpcaBasis {
  Eigen::VectorXd grid;
  Eigen::VectorXd mean;             // pointwise sample mean curve (length T)
  Eigen::MatrixXd eigenfunctions;   // K x T, row k = phi_k on the grid
  Eigen::VectorXd eigenvalues;      // length K, descending, clamped at 0
  double total_variance = 0.0;      // quadrature trace of the covariance
  Eigen::MatrixXd scores;           // n x K, s_ik = <X_i - mean, phi_k>
};

// K must lie in [1, min(n-1, T)]; curves must be dense.
FpcaBasis fpca(const CurveSet& curves, int K);

// Curve reconstruction from the first K components: mean + sum_k s_k phi_k.
Eigen::MatrixXd fpca_reconstruct(const FpcaBasis& basis);

// Scores of a new curve against an existing basis: <x - mean, phi_k>.
Eigen::VectorXd fpca_project(const FpcaBasis& basis, const Eigen::VectorXd& curve);

// Smallest K whose eigenvalues explain `threshold` of total variance,
// clamped to [1, min(cap, #eigenvalues)].
int choose_k(const Eigen::VectorXd& eigenvalues, double total_variance,
             double threshold, int cap);

}  // namespace fsim
