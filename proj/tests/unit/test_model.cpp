#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fsim/error_model.hpp"
#include "fsim/errors.hpp"
#include "fsim/model.hpp"
#include "fsim/simulation.hpp"

using namespace fsim;

namespace {

FitOptions quick_options() {
  FitOptions fo;
  fo.mcmc.burn_in = 200;
  fo.mcmc.keep = 400;
  fo.mcmc.seed = 17;
  return fo;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("fit options validation") {
  FitOptions fo;
  fo.validate();  // defaults pass
  FitOptions bad = fo;
  bad.K = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = fo;
  bad.var_threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = fo;
  bad.k_cap = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = fo;
  bad.ar_order = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = fo;
  bad.ar_order = -2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = fo;
  bad.mcmc.tau0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("AR order selection separates white noise from an AR(1) series") {
  Rng rng(81);
  const int n = 300;
  Eigen::VectorXd white(n);
  for (int i = 0; i < n; ++i) white[i] = rng.normal();
  CHECK(select_ar_order_aicc(white) == 0);

  Eigen::VectorXd ar(n);
  ar[0] = rng.normal() / std::sqrt(1.0 - 0.64);
  for (int i = 1; i < n; ++i) ar[i] = 0.8 * ar[i - 1] + rng.normal();
  const int p = select_ar_order_aicc(ar);
  CHECK(p >= 1);
  CHECK(p <= 3);

  CHECK(select_ar_order_aicc(ar, 0) == 0);
  CHECK(select_ar_order_aicc(white.head(5)) == 0);  // too short for any lag
  CHECK_THROWS_AS(select_ar_order_aicc(white, -1), std::invalid_argument);
}

TEST_CASE("fitted model wires the posterior estimates together") {
  Rng rng(82);
  const CurveSet curves = gen_curves(30, CurveKind::smooth, rng);
  const ResponseSample resp =
      gen_response(curves, ErrorStructure::iid, 0.1, 0.0, rng);
  FitOptions fo = quick_options();
  fo.ar_order = 1;
  const FsimModel model = fit_fsim(curves, resp.y, fo);

  CHECK(model.h == doctest::Approx(model.chain.mean_h()).epsilon(1e-14));
  CHECK(model.b == doctest::Approx(model.chain.mean_b()).epsilon(1e-14));
  REQUIRE(model.rho.size() == 1);
  CHECK(model.rho[0] == doctest::Approx(model.chain.mean_rho()[0]).epsilon(1e-14));
  CHECK(model.fit.h == model.h);
  CHECK(model.h > 0.0);
  CHECK(model.b > 0.0);
  CHECK(std::abs(model.rho[0]) < 1.0);

  // residuals and innovations are consistent with the stored estimates
  const Eigen::VectorXd res =
      make_index_model(model.fit.z(), model.y).residuals(model.h);
  CHECK((res - model.residuals).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((ar_filter(model.residuals, model.rho) - model.innovations)
            .lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(model.fallback_count == 0);

  const NwModel sm = model.smoother();
  CHECK((sm.x - model.fit.z()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(sm.h == model.h);
  const KernelErrorDensity d = model.density();
  CHECK((d.centers - model.innovations).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(d.b == model.b);

  CHECK(model.chain.draws.rows() == 400);
  CHECK(model.chain.names.size() == 3);
}

TEST_CASE("AR order options control the fitted coefficients") {
  Rng rng(83);
  const CurveSet curves = gen_curves(24, CurveKind::smooth, rng);
  const ResponseSample resp =
      gen_response(curves, ErrorStructure::iid, 0.1, 0.0, rng);
  FitOptions fo = quick_options();
  fo.mcmc.keep = 150;
  fo.mcmc.burn_in = 80;

  fo.ar_order = 0;
  CHECK(fit_fsim(curves, resp.y, fo).rho.size() == 0);
  fo.ar_order = 2;
  CHECK(fit_fsim(curves, resp.y, fo).rho.size() == 2);
}

TEST_CASE("index dimension: explicit override and variance-fraction default") {
  Rng rng(84);
  const CurveSet curves = gen_curves(60, CurveKind::smooth, rng);
  const ResponseSample resp =
      gen_response(curves, ErrorStructure::iid, 0.1, 0.0, rng);
  FitOptions fo = quick_options();
  fo.mcmc.keep = 150;
  fo.mcmc.burn_in = 80;
  fo.ar_order = 0;

  fo.K = 2;
  CHECK(fit_fsim(curves, resp.y, fo).fit.beta_coeffs.size() == 2);
  // the smooth design spans three functions; the default rule keeps all three
  fo.K = 0;
  CHECK(fit_fsim(curves, resp.y, fo).fit.beta_coeffs.size() == 3);
}

TEST_CASE("a noiseless single index response is fitted closely") {
  Rng rng(85);
  const CurveSet curves = gen_curves(60, CurveKind::smooth, rng);
  const Eigen::VectorXd m = true_link(true_index(curves));
  FitOptions fo = quick_options();
  fo.ar_order = 0;
  const FsimModel model = fit_fsim(curves, m, fo);
  const Eigen::VectorXd fitted = m - model.residuals;
  const double mse = (fitted - m).squaredNorm() / m.size();
  const double var_m = (m.array() - m.mean()).square().sum() / (m.size() - 1.0);
  CHECK(mse < 1e-2 * var_m);
}

TEST_CASE("degenerate inputs are rejected") {
  Rng rng(86);
  const CurveSet curves = gen_curves(20, CurveKind::smooth, rng);
  FitOptions fo = quick_options();
  fo.mcmc.keep = 120;
  fo.mcmc.burn_in = 50;

  CHECK_THROWS_AS(fit_fsim(curves, Eigen::VectorXd::Constant(20, 3.0), fo),
                  numeric_error);
  CHECK_THROWS_AS(fit_fsim(curves, Eigen::VectorXd::Zero(19), fo),
                  std::invalid_argument);

  const CurveSet sparse = gen_curves(20, CurveKind::sparse_smooth, rng);
  CHECK_THROWS_AS(fit_fsim(sparse, Eigen::VectorXd::Zero(20), fo),
                  std::invalid_argument);

  FitOptions big_k = fo;
  big_k.K = 25;
  CHECK_THROWS_AS(fit_fsim(curves, Eigen::VectorXd::Zero(20), big_k),
                  std::invalid_argument);
}

TEST_CASE("prediction interval level is validated on the model") {
  Rng rng(87);
  const CurveSet curves = gen_curves(16, CurveKind::smooth, rng);
  const ResponseSample resp =
      gen_response(curves, ErrorStructure::iid, 0.1, 0.0, rng);
  FitOptions fo = quick_options();
  fo.mcmc.keep = 120;
  fo.mcmc.burn_in = 50;
  fo.ar_order = 0;
  const FsimModel model = fit_fsim(curves, resp.y, fo);
  const Eigen::VectorXd curve = curves.values.row(0).transpose();
  CHECK_THROWS_AS(model.predict_interval(curve, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(model.predict_interval(curve, 1.0), std::invalid_argument);
  const Interval iv = model.predict_interval(curve, 0.95);
  CHECK(iv.lo <= iv.point);
  CHECK(iv.point <= iv.hi);
}

}  // TEST_SUITE
