#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fsim/quadrature.hpp"
#include "fsim/rng.hpp"

using namespace fsim;

TEST_SUITE("quadrature") {

TEST_CASE("trapezoid weights on a uniform grid") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 5);
  const Eigen::VectorXd w = trapezoid_weights(grid);
  CHECK(w.size() == 5);
  CHECK(w[0] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(w[3] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(w[4] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trapezoid weights on a non-uniform grid are positive and sum to the span") {
  Eigen::VectorXd grid(4);
  grid << 0.0, 0.1, 0.5, 2.0;
  const Eigen::VectorXd w = trapezoid_weights(grid);
  CHECK((w.array() > 0.0).all());
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  // hand values: (0.1/2, (0.5-0)/2, (2-0.1)/2, (2-0.5)/2)
  CHECK(w[0] == doctest::Approx(0.05));
  CHECK(w[1] == doctest::Approx(0.25));
  CHECK(w[2] == doctest::Approx(0.95));
  CHECK(w[3] == doctest::Approx(0.75));
}

TEST_CASE("inner product of unit constants over [0,1] is 1") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 11);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(11);
  CHECK(inner_product(grid, ones, ones) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("orthogonality of sin(2 pi t) and cos(2 pi t)") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 1001);
  Eigen::VectorXd f(1001), g(1001);
  for (int i = 0; i < 1001; ++i) {
    f[i] = std::sin(2.0 * M_PI * grid[i]);
    g[i] = std::cos(2.0 * M_PI * grid[i]);
  }
  CHECK(std::abs(inner_product(grid, f, g)) < 1e-6);
}

TEST_CASE("closed form: integral of sin^2(pi t) over [0,1] is 1/2") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 1001);
  Eigen::VectorXd f(1001);
  for (int i = 0; i < 1001; ++i) f[i] = std::sin(M_PI * grid[i]);
  CHECK(inner_product(grid, f, f) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(l2_norm(grid, f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("integral is exact for linear integrands") {
  const Eigen::VectorXd grid = uniform_grid(0.0, 1.0, 7);
  CHECK(integral(grid, grid) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("bilinearity and symmetry on random inputs") {
  Rng rng(99);
  const Eigen::VectorXd grid = uniform_grid(0.0, 2.0, 31);
  Eigen::VectorXd f(31), g(31), h(31);
  for (int i = 0; i < 31; ++i) {
    f[i] = rng.normal();
    g[i] = rng.normal();
    h[i] = rng.normal();
  }
  const double a = 1.7, b = -0.3;
  const double lhs = inner_product(grid, (a * f + b * g).eval(), h);
  const double rhs = a * inner_product(grid, f, h) + b * inner_product(grid, g, h);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(inner_product(grid, f, g) ==
        doctest::Approx(inner_product(grid, g, f)).epsilon(1e-15));
}

TEST_CASE("uniform_grid endpoints and spacing") {
  const Eigen::VectorXd g = uniform_grid(-1.0, 3.0, 9);
  CHECK(g.size() == 9);
  CHECK(g[0] == -1.0);
  CHECK(g[8] == 3.0);
  CHECK(g[1] - g[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("argument validation") {
  Eigen::VectorXd good = uniform_grid(0.0, 1.0, 3);
  Eigen::VectorXd f3 = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd f4 = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS((void)inner_product(good, f3, f4), std::invalid_argument);
  CHECK_THROWS_AS((void)inner_product(good, f4, f4), std::invalid_argument);
  Eigen::VectorXd bad(3);
  bad << 0.0, 0.5, 0.5;  // not strictly increasing
  CHECK_THROWS_AS((void)trapezoid_weights(bad), std::invalid_argument);
  Eigen::VectorXd one(1);
  one << 0.0;
  CHECK_THROWS_AS((void)trapezoid_weights(one), std::invalid_argument);
  CHECK_THROWS_AS((void)uniform_grid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)uniform_grid(1.0, 0.0, 5), std::invalid_argument);
}

}  // TEST_SUITE
