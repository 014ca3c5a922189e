#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fsim/curves.hpp"
#include "fsim/quadrature.hpp"

using namespace fsim;

namespace {

CurveSet dense_3x4() {
  CurveSet c;
  c.grid = uniform_grid(0.0, 1.0, 4);
  c.values.resize(3, 4);
  c.values << 1, 2, 3, 4,
              0, 0, 0, 0,
              -1, 1, -1, 1;
  return c;
}

}  // namespace

TEST_SUITE("curves") {

TEST_CASE("validate accepts a dense set and rejects bad shapes") {
  CurveSet c = dense_3x4();
  CHECK_NOTHROW(c.validate());
  CHECK(c.n() == 3);
  CHECK(c.t() == 4);
  CHECK_FALSE(c.sparse());

  CurveSet bad = c;
  bad.grid[2] = bad.grid[1];  // not strictly increasing
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CurveSet mismatch = c;
  mismatch.grid = uniform_grid(0.0, 1.0, 5);
  CHECK_THROWS_AS(mismatch.validate(), std::invalid_argument);

  CurveSet badmask = c;
  badmask.mask.resize(2, 4);  // wrong row count
  badmask.mask.setConstant(true);
  CHECK_THROWS_AS(badmask.validate(), std::invalid_argument);
}

TEST_CASE("impute_sparse returns dense input unchanged") {
  const CurveSet c = dense_3x4();
  const CurveSet out = impute_sparse(c);
  CHECK_FALSE(out.sparse());
  CHECK((out.values - c.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("impute_sparse interpolates linearly between observed points") {
  CurveSet c;
  c.grid.resize(3);
  c.grid << 0.0, 0.5, 1.0;
  c.values.resize(1, 3);
  c.values << 0.0, 999.0, 1.0;  // middle value unobserved, must be ignored
  c.mask.resize(1, 3);
  c.mask << true, false, true;
  const CurveSet out = impute_sparse(c);
  CHECK_FALSE(out.sparse());
  CHECK(out.values(0, 0) == doctest::Approx(0.0));
  CHECK(out.values(0, 1) == doctest::Approx(0.5).epsilon(1e-14));  // midpoint
  CHECK(out.values(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("impute_sparse extends constantly beyond the observed range") {
  CurveSet c;
  c.grid.resize(4);
  c.grid << 0.1, 0.2, 0.8, 0.9;
  c.values.resize(1, 4);
  c.values << -7.0, 3.0, 5.0, -7.0;  // ends unobserved
  c.mask.resize(1, 4);
  c.mask << false, true, true, false;
  const CurveSet out = impute_sparse(c);
  CHECK(out.values(0, 0) == doctest::Approx(3.0));   // value at first observed
  CHECK(out.values(0, 3) == doctest::Approx(5.0));   // value at last observed
}

TEST_CASE("impute_sparse requires two observed points per curve") {
  CurveSet c;
  c.grid.resize(3);
  c.grid << 0.0, 0.5, 1.0;
  c.values.resize(1, 3);
  c.values << 1.0, 2.0, 3.0;
  c.mask.resize(1, 3);
  c.mask << false, true, false;
  CHECK(c.observed_count(0) == 1);
  CHECK_THROWS_AS((void)impute_sparse(c), std::invalid_argument);
}

TEST_CASE("subset selects rows, keeps the grid, allows duplicates") {
  const CurveSet c = dense_3x4();
  const CurveSet s = subset(c, {2, 0, 2});
  CHECK(s.n() == 3);
  CHECK((s.grid - c.grid).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s.values.row(0) - c.values.row(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s.values.row(1) - c.values.row(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s.values.row(2) - c.values.row(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS((void)subset(c, {3}), std::invalid_argument);
  CHECK_THROWS_AS((void)subset(c, {}), std::invalid_argument);
}

TEST_CASE("subset carries the sparsity mask") {
  CurveSet c = dense_3x4();
  c.mask.resize(3, 4);
  c.mask.setConstant(true);
  c.mask(1, 2) = false;
  const CurveSet s = subset(c, {1});
  REQUIRE(s.sparse());
  CHECK_FALSE(s.mask(0, 2));
  CHECK(s.observed_count(0) == 3);
}

}  // TEST_SUITE
