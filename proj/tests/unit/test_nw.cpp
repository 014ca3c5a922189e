#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fsim/nadaraya_watson.hpp"
#include "fsim/rng.hpp"

using namespace fsim;

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

}  // namespace

TEST_SUITE("nadaraya-watson") {

TEST_CASE("hand-computed three-point estimate") {
  NwModel m;
  m.x.resize(3);
  m.x << 0.0, 1.0, 2.0;
  m.y.resize(3);
  m.y << 1.0, 2.0, 4.0;
  m.h = 1.0;
  // oracle, evaluated independently: x0=1 sees kernel weights
  // phi(1), phi(0), phi(1) -> (phi(1)*1 + phi(0)*2 + phi(1)*4) / (2 phi(1) + phi(0))
  const double oracle = (phi(1.0) * 1.0 + phi(0.0) * 2.0 + phi(1.0) * 4.0) /
                        (2.0 * phi(1.0) + phi(0.0));
  const NwEval e = nw_estimate(m, 1.0);
  CHECK_FALSE(e.fallback);
  CHECK(e.value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(e.value == doctest::Approx(2.274).epsilon(1e-3));
}

TEST_CASE("single training point dominates everywhere") {
  NwModel m;
  m.x = Eigen::VectorXd::Constant(1, 0.3);
  m.y = Eigen::VectorXd::Constant(1, -7.5);
  m.h = 0.01;
  CHECK(nw_estimate(m, 0.3).value == doctest::Approx(-7.5));
  CHECK(nw_estimate(m, 100.0).value == doctest::Approx(-7.5));  // fallback path
}

TEST_CASE("constant responses are reproduced exactly") {
  Rng rng(17);
  NwModel m;
  m.x.resize(20);
  for (int i = 0; i < 20; ++i) m.x[i] = rng.uniform(-3.0, 3.0);
  m.y = Eigen::VectorXd::Constant(20, 3.25);
  m.h = 0.5;
  for (double x0 : {-2.0, 0.0, 1.5}) {
    CHECK(nw_estimate(m, x0).value == doctest::Approx(3.25).epsilon(1e-12));
  }
}

TEST_CASE("estimates are convex combinations of the responses") {
  Rng rng(31);
  NwModel m;
  m.x.resize(30);
  m.y.resize(30);
  for (int i = 0; i < 30; ++i) {
    m.x[i] = rng.normal();
    m.y[i] = rng.normal(0.0, 4.0);
  }
  m.h = 0.3;
  const double lo = m.y.minCoeff(), hi = m.y.maxCoeff();
  for (int k = 0; k < 200; ++k) {
    const double v = nw_estimate(m, rng.uniform(-3.0, 3.0)).value;
    CHECK(v >= lo - 1e-12);
    CHECK(v <= hi + 1e-12);
  }
}

TEST_CASE("adding a constant to y shifts the estimate by that constant") {
  Rng rng(8);
  NwModel m;
  m.x.resize(15);
  m.y.resize(15);
  for (int i = 0; i < 15; ++i) {
    m.x[i] = rng.uniform(0.0, 1.0);
    m.y[i] = rng.normal();
  }
  m.h = 0.2;
  NwModel shifted = m;
  shifted.y.array() += 5.0;
  for (double x0 : {0.1, 0.4, 0.9}) {
    CHECK(nw_estimate(shifted, x0).value ==
          doctest::Approx(nw_estimate(m, x0).value + 5.0).epsilon(1e-12));
  }
}

TEST_CASE("huge bandwidths collapse the estimate to the mean") {
  Rng rng(46);
  NwModel m;
  m.x.resize(25);
  m.y.resize(25);
  for (int i = 0; i < 25; ++i) {
    m.x[i] = rng.uniform(0.0, 2.0);
    m.y[i] = rng.normal(1.0, 2.0);
  }
  m.h = 1e6 * (m.x.maxCoeff() - m.x.minCoeff());
  CHECK(nw_estimate(m, 0.7).value ==
        doctest::Approx(m.y.mean()).epsilon(1e-6));
}

TEST_CASE("far extrapolation falls back to the nearest response") {
  NwModel m;
  m.x.resize(3);
  m.x << 0.0, 0.5, 1.0;
  m.y.resize(3);
  m.y << 1.0, 2.0, 3.0;
  m.h = 0.01;
  const NwEval e = nw_estimate(m, 1e6);
  CHECK(e.fallback);
  CHECK(e.value == doctest::Approx(3.0));  // nearest point's response
}

TEST_CASE("nw_fit agrees with pointwise estimates and counts fallbacks") {
  Rng rng(5);
  NwModel m;
  m.x.resize(12);
  m.y.resize(12);
  for (int i = 0; i < 12; ++i) {
    m.x[i] = rng.uniform(0.0, 1.0);
    m.y[i] = rng.normal();
  }
  m.h = 0.15;
  Eigen::VectorXd x0(4);
  x0 << 0.2, 0.5, 0.8, 1e7;  // last one underflows all weights
  int fallbacks = 0;
  const Eigen::VectorXd f = nw_fit(m, x0, &fallbacks);
  REQUIRE(f.size() == 4);
  for (int j = 0; j < 4; ++j)
    CHECK(f[j] == doctest::Approx(nw_estimate(m, x0[j]).value).epsilon(1e-15));
  CHECK(fallbacks == 1);
}

TEST_CASE("leave-one-out residuals match a brute-force oracle on three points") {
  Eigen::VectorXd x(3), y(3);
  x << 0.0, 0.4, 1.0;
  y << 1.0, -2.0, 0.5;
  const double h = 0.7;
  const Eigen::VectorXd r = nw_loo_residuals(x, y, h);
  for (int i = 0; i < 3; ++i) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const double w = phi((x[i] - x[j]) / h);
      num += w * y[j];
      den += w;
    }
    CHECK(r[i] == doctest::Approx(y[i] - num / den).epsilon(1e-12));
  }
}

TEST_CASE("loo residuals of pure noise centre at zero") {
  Rng rng(99);
  const int n = 400;
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.uniform(0.0, 1.0);
    y[i] = rng.normal();
  }
  const Eigen::VectorXd r = nw_loo_residuals(x, y, 0.1);
  const double mean = r.mean();
  const double sd = std::sqrt((r.array() - mean).square().sum() / (n - 1));
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("tiny bandwidths keep residuals within neighbour variation") {
  // noiseless smooth signal: with h -> 0 each leave-one-out estimate is
  // pulled to the nearest remaining neighbour, so residuals are bounded by
  // the largest signal change across adjacent design points
  const int n = 50;
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i) / (n - 1);
    y[i] = x[i] * x[i];
  }
  const Eigen::VectorXd r = nw_loo_residuals(x, y, 1e-4);
  double max_gap = 0.0;
  for (int i = 1; i < n; ++i) max_gap = std::max(max_gap, std::abs(y[i] - y[i - 1]));
  CHECK(r.cwiseAbs().maxCoeff() <= 2.0 * max_gap + 1e-12);
}

TEST_CASE("argument validation") {
  NwModel m;
  m.x = Eigen::VectorXd::Zero(2);
  m.y = Eigen::VectorXd::Zero(3);
  m.h = 1.0;
  CHECK_THROWS_AS((void)nw_estimate(m, 0.0), std::invalid_argument);
  m.y = Eigen::VectorXd::Zero(2);
  m.h = 0.0;
  CHECK_THROWS_AS((void)nw_estimate(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)nw_loo_residuals(Eigen::VectorXd::Zero(2),
                                         Eigen::VectorXd::Zero(2), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)nw_loo_residuals(Eigen::VectorXd::Zero(1),
                                         Eigen::VectorXd::Zero(1), 1.0),
                  std::invalid_argument);
}

}  // TEST_SUITE
