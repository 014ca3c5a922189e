#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fsim/rng.hpp"

namespace fsim {

// Prior on the squared bandwidths (h^2, b^2). The AR coefficients always get
// the flat prior (1/2)^p on the stationary region.
struct PriorSpec {
  enum class Kind { inverse_gamma, cauchy };
  Kind kind = Kind::inverse_gamma;
  double ig_alpha = 1.0;     // IG(1, 0.05) default; IG(2, 0.1) alternative
  double ig_beta = 0.05;
  double cauchy_scale = 1.0; // Cauchy(0, 1) on the positive half-line

  static PriorSpec ig(double alpha, double beta);
  static PriorSpec cauchy(double scale = 1.0);
};

// Residual-producing context for the posterior: holds the pairwise squared
// differences of the smoothing covariate (index values or semimetric
// distances; +inf diagonal so leave-one-out is implicit) and the responses.
struct ResidualModel {
  Eigen::MatrixXd sqdiff;  // n x n, sqdiff(i,i) = +inf
  Eigen::VectorXd y;

  int n() const { return static_cast<int>(y.size()); }
  // Leave-one-out kernel regression residuals at bandwidth h (> 0), with
  // nearest-neighbour fallback for rows whose weights all underflow.
  Eigen::VectorXd residuals(double h, int* fallback_count = nullptr) const;
};

ResidualModel make_index_model(const Eigen::VectorXd& z, const Eigen::VectorXd& y);
ResidualModel make_distance_model(const Eigen::MatrixXd& distances,
                                  const Eigen::VectorXd& y);

// Parameter vector layout throughout: theta = (h^2, b^2, rho_1..rho_p).
// Log prior density; -inf encodes "outside support" (non-positive squared
// bandwidths or non-stationary rho) and never throws.
double log_prior(const Eigen::VectorXd& theta, int p, const PriorSpec& prior);

// log_prior + log_kernel_likelihood with residuals recomputed at h = sqrt(h^2).
double log_posterior(const Eigen::VectorXd& theta, const ResidualModel& data,
                     int p, const PriorSpec& prior);

// Robbins-Monro scale adaptation towards acceptance rate p_target:
//   accepted:  tau + c(1 - p_target)/i
//   rejected:  tau - c p_target/i          with c = tau / (p_target(1-p_target)),
// floored at 1e-8. i is the 1-based iteration count.
double robbins_monro_update(double tau, bool accepted, int iteration,
                            double p_target = 0.44);

// One component-wise random-walk Metropolis move: perturbs theta[component]
// by tau * N(0,1), accepts with probability min(1, exp(lp' - lp)). Always
// consumes exactly one normal and one uniform draw.
struct RwmResult {
  Eigen::VectorXd theta;
  double log_post = 0.0;
  bool accepted = false;
};
RwmResult rwm_step(const Eigen::VectorXd& theta, double log_post, int component,
                   double tau,
                   const std::function<double(const Eigen::VectorXd&)>& log_target,
                   Rng& rng);

struct McmcConfig {
  int burn_in = 1000;
  int keep = 10000;
  double tau0 = 0.1;        // initial proposal scale (all components)
  double p_target = 0.44;
  std::uint64_t seed = 0;

  void validate() const;    // throws std::invalid_argument
};

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double lower = 0.0, upper = 0.0;  // 2.5% / 97.5% empirical quantiles
  double se = 0.0;                  // sd / sqrt(N)
  double batch_se = 0.0;            // batch-means standard error
  double sif = 0.0;                 // (batch_se / se)^2
  double geweke_z = 0.0;
  double accept_rate = 0.0;         // post burn-in
  double final_tau = 0.0;
};

struct ChainSummary {
  std::vector<std::string> names;     // "h2", "b2", "rho1", ...
  Eigen::MatrixXd draws;              // keep x (2 + p), post burn-in
  std::vector<ParamSummary> params;

  double mean_h() const;              // sqrt(mean h^2 draws)
  double mean_b() const;              // sqrt(mean b^2 draws)
  Eigen::VectorXd mean_rho() const;   // posterior means of rho
};

// Adaptive component-wise random-walk Metropolis on (h^2, b^2, rho). Starting
// values are U(0,1) redrawn until the posterior is finite (at most 100
// tries); each iteration sweeps components in the order b^2, h^2,
// rho_1..rho_p; proposal scales adapt by Robbins-Monro during burn-in and
// kept iterations alike. Kept draws all lie inside the prior support.
ChainSummary run_chain(const ResidualModel& data, int p, const PriorSpec& prior,
                       const McmcConfig& cfg);

// Per-parameter chain diagnostics for an N x d draw matrix, N >= 100:
// se, batch-means se (floor(sqrt(N)) batches), SIF, Geweke z. Fills only the
// diagnostic fields of ParamSummary.
std::vector<ParamSummary> chain_diagnostics(const Eigen::MatrixXd& draws);

// Geweke convergence score between the first `first` and last `last`
// fractions of the chain, using batch-means variance estimates on each
// window. A constant chain scores 0 by convention.
double geweke_z(const Eigen::VectorXd& x, double first = 0.1, double last = 0.5);

// Autocorrelation function at lags 0..max_lag (lag 0 = 1; a constant series
// returns 1, 0, 0, ...).
Eigen::VectorXd acf(const Eigen::VectorXd& x, int max_lag);

}  // namespace fsim
