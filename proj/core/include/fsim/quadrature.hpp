#pragma once

#include <Eigen/Dense>

namespace fsim {

// Trapezoid-rule quadrature weights for a strictly increasing grid (size >= 2):
// w_0 = (t_1-t_0)/2, w_j = (t_{j+1}-t_{j-1})/2, w_{T-1} = (t_{T-1}-t_{T-2})/2.
// All weights are positive and sum to the grid span.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid);

// Trapezoid approximation of \int f(t) g(t) dt over the grid.
double inner_product(const Eigen::VectorXd& grid, const Eigen::VectorXd& f,
                     const Eigen::VectorXd& g);

// Trapezoid approximation of \int f(t) dt.
double integral(const Eigen::VectorXd& grid, const Eigen::VectorXd& f);

// L2 norm sqrt(\int f^2).
double l2_norm(const Eigen::VectorXd& grid, const Eigen::VectorXd& f);

// Uniform grid of `size` points on [a, b] (size >= 2).
Eigen::VectorXd uniform_grid(double a, double b, int size);

}  // namespace fsim
