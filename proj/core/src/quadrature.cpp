#include "fsim/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fsim {

namespace {
void check_grid(const Eigen::VectorXd& grid) {
  if (grid.size() < 2) throw std::invalid_argument("quadrature: grid needs >= 2 points");
  for (int i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("quadrature: grid must be strictly increasing");
  }
}
}  // namespace

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
  check_grid(grid);
  const int t = static_cast<int>(grid.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(t);
  w[0] = 0.5 * (grid[1] - grid[0]);
  w[t - 1] = 0.5 * (grid[t - 1] - grid[t - 2]);
  for (int j = 1; j < t - 1; ++j) w[j] = 0.5 * (grid[j + 1] - grid[j - 1]);
  return w;
}

double inner_product(const Eigen::VectorXd& grid, const Eigen::VectorXd& f,
                     const Eigen::VectorXd& g) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw std::invalid_argument("inner_product: size mismatch with grid");
  return (trapezoid_weights(grid).array() * f.array() * g.array()).sum();
}

double integral(const Eigen::VectorXd& grid, const Eigen::VectorXd& f) {
  if (f.size() != grid.size())
    throw std::invalid_argument("integral: size mismatch with grid");
  return trapezoid_weights(grid).dot(f);
}

double l2_norm(const Eigen::VectorXd& grid, const Eigen::VectorXd& f) {
  return std::sqrt(inner_product(grid, f, f));
}

Eigen::VectorXd uniform_grid(double a, double b, int size) {
  if (size < 2) throw std::invalid_argument("uniform_grid: size must be >= 2");
  if (!(b > a)) throw std::invalid_argument("uniform_grid: b must exceed a");
  Eigen::VectorXd g(size);
  for (int i = 0; i < size; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(size - 1);
  return g;
}

}  // namespace fsim
