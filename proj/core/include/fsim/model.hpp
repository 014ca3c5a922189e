#pragma once

#include <Eigen/Dense>
#include <string>

#include "fsim/curves.hpp"
#include "fsim/forecast.hpp"
#include "fsim/mcmc.hpp"
#include "fsim/single_index.hpp"

namespace fsim {

struct FitOptions {
  int K = 0;                   // 0 = auto (variance-fraction rule)
  double var_threshold = 0.99; // fraction of variance the auto rule must reach
  int k_cap = 10;
  int ar_order = -1;           // -1 = auto (corrected AIC over 0..3), else 0..3
  PriorSpec prior;
  McmcConfig mcmc;

  void validate() const;
};

// A fitted functional single index model with Bayesian bandwidths: everything
// needed to forecast new curves and build prediction intervals.
struct FsimModel {
  SindexFit fit;                  // basis, beta, index, standardisation
  Eigen::VectorXd y;              // training responses
  double h = 0.0;                 // posterior bandwidth sqrt(E[h^2])
  double b = 0.0;                 // posterior error-density bandwidth
  Eigen::VectorXd rho;            // posterior mean AR coefficients (may be empty)
  Eigen::VectorXd residuals;      // leave-one-out residuals at h
  Eigen::VectorXd innovations;    // AR-filtered residuals
  ChainSummary chain;             // summary + kept draws
  int fallback_count = 0;         // residual rows that hit the kernel fallback

  NwModel smoother() const;       // (z, y, h)
  KernelErrorDensity density() const;  // (innovations, b)

  double predict_point(const Eigen::VectorXd& curve) const;
  Interval predict_interval(const Eigen::VectorXd& curve, double level,
                            bool fixed_grid = false) const;
};

// Full estimation pipeline: FPCA -> index least squares -> AR order (if auto,
// corrected AIC on pilot residuals at a rule-of-thumb bandwidth) -> adaptive
// random-walk Metropolis for (h^2, b^2, rho) -> posterior point estimates and
// leave-one-out residuals. Curves must be dense (impute_sparse first).
FsimModel fit_fsim(const CurveSet& curves, const Eigen::VectorXd& y,
                   const FitOptions& opts);

// Corrected-AIC AR order selection on a residual series (least-squares AR
// fits on the common sample trimmed to max_order lags). Returns 0..max_order.
int select_ar_order_aicc(const Eigen::VectorXd& eps, int max_order = 3);

// JSON (de)serialisation of a fitted model. Numbers round-trip bit-exactly;
// chain draws are not stored (summaries are).
std::string model_to_json(const FsimModel& model);
FsimModel model_from_json(const std::string& text);

}  // namespace fsim
