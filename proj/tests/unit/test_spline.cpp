#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fsim/quadrature.hpp"
#include "fsim/rng.hpp"
#include "fsim/smoothing_spline.hpp"

using namespace fsim;

TEST_SUITE("smoothing-spline") {

TEST_CASE("linear data pass through untouched at any smoothing level") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 30);
  const Eigen::VectorXd y = 2.0 * grid.array() - 0.7;
  const SplineSmoother s(grid);
  // the roughness penalty vanishes on linear functions, so they are fixed
  // points of the smoother for every lambda
  for (const double lambda : {1e-8, 1.0, 1e8}) {
    const Eigen::VectorXd f = s.smooth_fixed(y, lambda);
    CHECK((f - y).cwiseAbs().maxCoeff() < 1e-8);
  }
  const Eigen::VectorXd g = s.smooth(y);
  CHECK((g - y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("heavy smoothing of noise flattens towards a trend line") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 50);
  Rng rng(3);
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) y[i] = rng.normal();
  const SplineSmoother s(grid);
  const Eigen::VectorXd f = s.smooth_fixed(y, 1e10);
  // with lambda -> inf the fit approaches the least-squares line; its second
  // differences must be essentially zero
  for (int i = 1; i < 49; ++i)
    CHECK(std::abs(f[i + 1] - 2.0 * f[i] + f[i - 1]) < 1e-6);
}

TEST_CASE("gcv smoothing recovers a smooth signal under small noise") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 100);
  Rng rng(12);
  Eigen::VectorXd truth(100), y(100);
  for (int i = 0; i < 100; ++i) {
    truth[i] = std::sin(2.0 * M_PI * grid[i]);
    y[i] = truth[i] + 0.05 * rng.normal();
  }
  const SplineSmoother s(grid);
  double lambda = -1.0;
  const Eigen::VectorXd f = s.smooth(y, &lambda);
  CHECK(lambda > 0.0);
  CHECK((f - truth).cwiseAbs().maxCoeff() < 0.15);
  CHECK(std::sqrt((f - truth).squaredNorm() / 100.0) <
        std::sqrt((y - truth).squaredNorm() / 100.0));  // beats raw data
}

TEST_CASE("derivative of a straight line is its slope") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 2.0, 40);
  const Eigen::VectorXd y = 3.0 * grid.array() + 1.0;
  const SplineSmoother s(grid);
  const Eigen::VectorXd d1 = s.derivative(y, 1);
  CHECK((d1.array() - 3.0).abs().maxCoeff() < 1e-9);
  const Eigen::VectorXd d2 = s.derivative(y, 2);
  CHECK(d2.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("derivatives of a quadratic match 2t and 2 in the interior") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 51);
  const Eigen::VectorXd y = grid.array().square();
  const SplineSmoother s(grid);
  const Eigen::VectorXd d1 = s.derivative(y, 1);
  const Eigen::VectorXd d2 = s.derivative(y, 2);
  // the natural boundary conditions (f'' = 0 at the ends) bias the edges,
  // so check away from them
  for (int i = 10; i <= 40; ++i) {
    CHECK(d1[i] == doctest::Approx(2.0 * grid[i]).epsilon(0.02));
    CHECK(d2[i] == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("argument validation") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 10);
  const SplineSmoother s(grid);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(10);
  CHECK_THROWS_AS((void)s.derivative(y, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)s.derivative(Eigen::VectorXd::Ones(4), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)s.smooth_fixed(y, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(SplineSmoother(uniform_grid(0.0, 1.0, 2)), std::invalid_argument);
}

}  // TEST_SUITE
