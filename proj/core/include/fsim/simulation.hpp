#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fsim/curves.hpp"
#include "fsim/mcmc.hpp"
#include "fsim/rng.hpp"

namespace fsim {

enum class CurveKind { smooth, rough, sparse_smooth, sparse_rough };
enum class ErrorStructure { iid, ar1 };

const char* to_string(CurveKind k);
const char* to_string(ErrorStructure e);
CurveKind curve_kind_from_string(const std::string& s);      // throws invalid_argument
ErrorStructure error_structure_from_string(const std::string& s);

struct DgpConfig {
  int n = 60;
  int n_test = -1;              // -1 = n / 2
  CurveKind curves = CurveKind::smooth;
  ErrorStructure errors = ErrorStructure::iid;
  double xi = 0.1;              // noise-to-signal variance ratio, > 0
  double rho = 0.8;             // AR(1) coefficient when errors == ar1
  int reps = 20;
  std::uint64_t seed = 42;
  int threads = 0;              // 0 = hardware concurrency
  bool nfr_mise = false;        // also estimate error-density MISE for NFR fits
  int index_k = 0;              // 0 = auto (variance-fraction rule)
  double var_threshold = 0.99;
  int k_cap = 10;
  PriorSpec prior;
  McmcConfig mcmc;

  int resolved_n_test() const { return n_test < 0 ? n / 2 : n_test; }
  void validate() const;        // throws std::invalid_argument
};

// Simulated designs on the uniform grid of 100 points over [0, 1]:
//   smooth:  X(t) = a cos(2 pi t) + b sin(4 pi t) + 2c (t - 0.25)(t - 0.5),
//            a, b, c ~ U[0, 1] independently (values bounded by 2.2);
//   rough:   smooth plus an independent U(-0.1, 0.1) jitter at every point;
//   sparse(_smooth/_rough): the dense curve observed at exactly 30 grid
//            points selected uniformly at random per curve (mask set; the
//            underlying dense values are kept for generating responses).
CurveSet gen_curves(int n, CurveKind kind, Rng& rng);

// True data-generating structures: index coefficient sin(pi t), link
// m(x) = 100 (x - 0.15)^3 applied to <X, sin(pi .)>.
Eigen::VectorXd true_beta(const Eigen::VectorXd& grid);
Eigen::VectorXd true_index(const CurveSet& curves);
double true_link(double x);
Eigen::VectorXd true_link(const Eigen::VectorXd& index);

// Responses y = m + eps with Var(eps) = xi * Var(m) (sample variance of the
// signal; sigma2_override >= 0 reuses a precomputed noise variance so test
// responses share the training noise scale). iid: Gaussian; ar1: stationary
// AR(1) with marginal variance sigma2 (Gaussian innovations).
struct ResponseSample {
  Eigen::VectorXd y;
  Eigen::VectorXd m;      // true regression values
  Eigen::VectorXd eps;
  double sigma2 = 0.0;    // marginal noise variance used
};
ResponseSample gen_response(const CurveSet& curves, ErrorStructure errors,
                            double xi, double rho, Rng& rng,
                            double sigma2_override = -1.0);

// Stationary AR(1) path with marginal variance sigma2_marginal: x_0 ~
// N(0, sigma2_marginal), x_t = rho x_{t-1} + eta_t,
// eta ~ N(0, sigma2_marginal (1 - rho^2)).
Eigen::VectorXd gen_ar1_path(int n, double sigma2_marginal, double rho, Rng& rng);

// Discrepancy between two densities accumulated over a 1001-point uniform
// grid on [lo, hi]: step * sum_i (f(x_i) - g(x_i))^2, a Riemann approximation
// of the integrated squared error (step = (hi - lo) / 1000).
double mise_grid(const std::function<double(double)>& f,
                 const std::function<double(double)>& g,
                 double lo = -5.0, double hi = 5.0);

inline constexpr std::array<const char*, 5> kNfrVariants = {
    "deriv1", "deriv2", "pca1", "pca2", "pca3"};

struct RepMetrics {
  double mse = 0.0;
  double mspe = 0.0;
  double mise = 0.0;      // NaN when not computed
  double coverage = 0.0;  // NaN when not computed
};

struct RepResult {
  int rep = 0;
  bool ok = false;
  std::string error;
  RepMetrics fsim;
  std::array<RepMetrics, 5> nfr;  // order of kNfrVariants
};

// One full replication (seeded by derive_seed(cfg.seed, rep_index); depends
// only on cfg and rep_index): generate train/test data, fit the single index
// model and the five kernel regressions on semimetrics, score them against
// the true regression function. Exceptions are caught by run_experiment.
RepResult run_replication(const DgpConfig& cfg, int rep_index);

struct MetricAgg {
  double mean = 0.0;
  double sd = 0.0;   // sample standard deviation across replications
  int count = 0;
};

struct MethodReport {
  std::string name;
  MetricAgg mse, mspe, mise, coverage;
};

struct ExperimentReport {
  DgpConfig cfg;
  std::vector<RepResult> reps;           // all replications, in order
  std::vector<MethodReport> methods;     // "fsim" first, then kNfrVariants
  int failures = 0;
  std::vector<std::string> failure_messages;
  std::vector<std::string> notes;        // methodological notes for the report
};

// Runs cfg.reps replications (optionally on a small thread pool; results are
// aggregated in replication order, so the report does not depend on the
// thread count). Failed replications are counted and excluded from the
// aggregates, never silently dropped.
ExperimentReport run_experiment(const DgpConfig& cfg);

// Aligned fixed-width table mirroring the simulation-study layout
// (rows = method x metric, columns = mean and sd) plus failure and note lines.
std::string report_text(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report);

}  // namespace fsim
