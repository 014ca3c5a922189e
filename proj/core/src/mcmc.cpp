#include "fsim/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fsim/error_model.hpp"
#include "fsim/errors.hpp"

namespace fsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kTauFloor = 1e-8;
constexpr double kDenomFloor = 1e-300;

double log_ig(double x, double alpha, double beta) {
  return alpha * std::log(beta) - std::lgamma(alpha) -
         (alpha + 1.0) * std::log(x) - beta / x;
}

double log_cauchy(double x, double scale) {
  const double u = x / scale;
  return -std::log(M_PI * scale) - std::log1p(u * u);
}

// Squared pairwise differences of v with +inf on the diagonal (so that
// leave-one-out sums fall out of full-row reductions).
Eigen::MatrixXd sqdiff_matrix(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = kInf;
    for (int j = i + 1; j < n; ++j) {
      const double d = v[i] - v[j];
      s(i, j) = d * d;
      s(j, i) = d * d;
    }
  }
  return s;
}

// Kernel-form log likelihood from a precomputed innovation sqdiff matrix.
double loglik_from_sqdiff(const Eigen::MatrixXd& e, double b) {
  const int m = static_cast<int>(e.rows());
  const double log_norm =
      std::log(static_cast<double>(m - 1)) + std::log(b) + 0.5 * kLog2Pi;
  const double scale = -1.0 / (2.0 * b * b);
  double ll = 0.0;
  for (int i = 0; i < m; ++i) {
    const Eigen::ArrayXd logw = e.row(i).transpose().array() * scale;
    const double mx = logw.maxCoeff();  // diagonal contributes -inf, ignored
    const double s = (logw - mx).exp().sum();  // exp(-inf) = 0 on the diagonal
    ll += mx + std::log(s) - log_norm;
  }
  return ll;
}

}  // namespace

PriorSpec PriorSpec::ig(double alpha, double beta) {
  PriorSpec p;
  p.kind = Kind::inverse_gamma;
  p.ig_alpha = alpha;
  p.ig_beta = beta;
  return p;
}

PriorSpec PriorSpec::cauchy(double scale) {
  PriorSpec p;
  p.kind = Kind::cauchy;
  p.cauchy_scale = scale;
  return p;
}

Eigen::VectorXd ResidualModel::residuals(double h, int* fallback_count) const {
  if (!(h > 0.0)) throw std::invalid_argument("ResidualModel: h must be > 0");
  const int n = this->n();
  if (n < 2) throw std::invalid_argument("ResidualModel: needs >= 2 observations");
  const Eigen::MatrixXd w = (sqdiff * (-1.0 / (2.0 * h * h))).array().exp();
  const Eigen::VectorXd num = w * y;
  const Eigen::VectorXd den = w.rowwise().sum();
  Eigen::VectorXd res(n);
  int fallbacks = 0;
  for (int i = 0; i < n; ++i) {
    if (den[i] < kDenomFloor) {
      int nearest = 0;
      sqdiff.row(i).minCoeff(&nearest);
      res[i] = y[i] - y[nearest];
      ++fallbacks;
    } else {
      res[i] = y[i] - num[i] / den[i];
    }
  }
  if (fallback_count) *fallback_count = fallbacks;
  return res;
}

ResidualModel make_index_model(const Eigen::VectorXd& z, const Eigen::VectorXd& y) {
  if (z.size() != y.size() || z.size() < 2)
    throw std::invalid_argument("make_index_model: z/y must be equally sized, n >= 2");
  return ResidualModel{sqdiff_matrix(z), y};
}

ResidualModel make_distance_model(const Eigen::MatrixXd& distances,
                                  const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  if (distances.rows() != n || distances.cols() != n || n < 2)
    throw std::invalid_argument("make_distance_model: distances must be n x n, n >= 2");
  Eigen::MatrixXd s = distances.array().square();
  s.diagonal().setConstant(kInf);
  return ResidualModel{std::move(s), y};
}

double log_prior(const Eigen::VectorXd& theta, int p, const PriorSpec& prior) {
  if (theta.size() != 2 + p)
    throw std::invalid_argument("log_prior: theta must have size 2 + p");
  const double h2 = theta[0];
  const double b2 = theta[1];
  if (!(h2 > 0.0) || !(b2 > 0.0) || !std::isfinite(h2) || !std::isfinite(b2))
    return -kInf;
  if (p > 0 && !ar_stationary(theta.tail(p))) return -kInf;

  double lp = p * std::log(0.5);  // flat (1/2)^p over the stationary region
  if (prior.kind == PriorSpec::Kind::inverse_gamma) {
    lp += log_ig(h2, prior.ig_alpha, prior.ig_beta);
    lp += log_ig(b2, prior.ig_alpha, prior.ig_beta);
  } else {
    lp += log_cauchy(h2, prior.cauchy_scale);
    lp += log_cauchy(b2, prior.cauchy_scale);
  }
  return lp;
}

double log_posterior(const Eigen::VectorXd& theta, const ResidualModel& data,
                     int p, const PriorSpec& prior) {
  const double lp = log_prior(theta, p, prior);
  if (!std::isfinite(lp)) return -kInf;
  const double h = std::sqrt(theta[0]);
  const double b = std::sqrt(theta[1]);
  const Eigen::VectorXd eps = data.residuals(h);
  const Eigen::VectorXd eta = ar_filter(eps, theta.tail(p));
  return lp + loglik_from_sqdiff(sqdiff_matrix(eta), b);
}

double robbins_monro_update(double tau, bool accepted, int iteration,
                            double p_target) {
  if (!(tau > 0.0)) throw std::invalid_argument("robbins_monro_update: tau must be > 0");
  if (iteration < 1)
    throw std::invalid_argument("robbins_monro_update: iteration must be >= 1");
  if (!(p_target > 0.0 && p_target < 1.0))
    throw std::invalid_argument("robbins_monro_update: p_target must lie in (0, 1)");
  const double c = tau / (p_target * (1.0 - p_target));
  const double step =
      accepted ? c * (1.0 - p_target) / iteration : -c * p_target / iteration;
  return std::max(tau + step, kTauFloor);
}

RwmResult rwm_step(const Eigen::VectorXd& theta, double log_post, int component,
                   double tau,
                   const std::function<double(const Eigen::VectorXd&)>& log_target,
                   Rng& rng) {
  if (component < 0 || component >= theta.size())
    throw std::invalid_argument("rwm_step: component out of range");
  if (!(tau > 0.0)) throw std::invalid_argument("rwm_step: tau must be > 0");
  Eigen::VectorXd proposal = theta;
  proposal[component] += tau * rng.normal();
  const double lp = log_target(proposal);
  const double u = rng.uniform();
  if (std::log(u) < lp - log_post) return {std::move(proposal), lp, true};
  return {theta, log_post, false};
}

void McmcConfig::validate() const {
  if (burn_in < 0) throw std::invalid_argument("McmcConfig: burn_in must be >= 0");
  if (keep < 1) throw std::invalid_argument("McmcConfig: keep must be >= 1");
  if (!(tau0 > 0.0)) throw std::invalid_argument("McmcConfig: tau0 must be > 0");
  if (!(p_target > 0.0 && p_target < 1.0))
    throw std::invalid_argument("McmcConfig: p_target must lie in (0, 1)");
}

double ChainSummary::mean_h() const {
  return std::sqrt(draws.col(0).mean());
}

double ChainSummary::mean_b() const {
  return std::sqrt(draws.col(1).mean());
}

Eigen::VectorXd ChainSummary::mean_rho() const {
  const int p = static_cast<int>(draws.cols()) - 2;
  Eigen::VectorXd r(p);
  for (int j = 0; j < p; ++j) r[j] = draws.col(2 + j).mean();
  return r;
}

namespace {

double quantile_sorted(const Eigen::VectorXd& sorted, double q) {
  const int n = static_cast<int>(sorted.size());
  const double pos = q * (n - 1);
  const int lo = static_cast<int>(std::floor(pos));
  if (lo >= n - 1) return sorted[n - 1];
  const double frac = pos - lo;
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// variance of the window mean via batch means with floor(sqrt(L)) batches
double batch_mean_variance(const Eigen::VectorXd& x) {
  const int l = static_cast<int>(x.size());
  const int nb = std::max(2, static_cast<int>(std::floor(std::sqrt(l))));
  const int bs = l / nb;
  Eigen::VectorXd bm(nb);
  for (int k = 0; k < nb; ++k) bm[k] = x.segment(k * bs, bs).mean();
  const double mean = bm.mean();
  const double var = (bm.array() - mean).square().sum() / (nb - 1.0);
  return var / nb;
}

}  // namespace

double geweke_z(const Eigen::VectorXd& x, double first, double last) {
  const int n = static_cast<int>(x.size());
  if (n < 20) throw std::invalid_argument("geweke_z: series too short");
  if (!(first > 0.0 && last > 0.0 && first + last <= 1.0))
    throw std::invalid_argument("geweke_z: invalid window fractions");
  const int na = std::max(4, static_cast<int>(std::floor(first * n)));
  const int nb = std::max(4, static_cast<int>(std::floor(last * n)));
  const Eigen::VectorXd a = x.head(na);
  const Eigen::VectorXd b = x.tail(nb);
  const double var = batch_mean_variance(a) + batch_mean_variance(b);
  if (!(var > 0.0)) return 0.0;  // constant windows
  return (a.mean() - b.mean()) / std::sqrt(var);
}

Eigen::VectorXd acf(const Eigen::VectorXd& x, int max_lag) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("acf: series too short");
  if (max_lag < 0 || max_lag >= n)
    throw std::invalid_argument("acf: max_lag must lie in [0, n)");
  const double mean = x.mean();
  const Eigen::ArrayXd c = x.array() - mean;
  const double gamma0 = c.square().sum() / n;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(max_lag + 1);
  out[0] = 1.0;
  if (!(gamma0 > 0.0)) return out;  // constant series: 1, 0, 0, ...
  for (int lag = 1; lag <= max_lag; ++lag) {
    double g = 0.0;
    for (int t = lag; t < n; ++t) g += c[t] * c[t - lag];
    out[lag] = (g / n) / gamma0;
  }
  return out;
}

std::vector<ParamSummary> chain_diagnostics(const Eigen::MatrixXd& draws) {
  const int n = static_cast<int>(draws.rows());
  if (n < 100) throw std::invalid_argument("chain_diagnostics: needs >= 100 draws");
  std::vector<ParamSummary> out(draws.cols());
  for (int c = 0; c < draws.cols(); ++c) {
    const Eigen::VectorXd x = draws.col(c);
    ParamSummary& s = out[c];
    const double mean = x.mean();
    const double sd = std::sqrt((x.array() - mean).square().sum() / (n - 1.0));
    if (sd < 1e-300) {
      s.se = s.batch_se = s.sif = s.geweke_z = 0.0;
      continue;
    }
    s.se = sd / std::sqrt(static_cast<double>(n));
    s.batch_se = std::sqrt(batch_mean_variance(x));
    s.sif = (s.batch_se / s.se) * (s.batch_se / s.se);
    s.geweke_z = geweke_z(x);
  }
  return out;
}

ChainSummary run_chain(const ResidualModel& data, int p, const PriorSpec& prior,
                       const McmcConfig& cfg) {
  cfg.validate();
  if (p < 0) throw std::invalid_argument("run_chain: p must be >= 0");
  if (data.n() - p < 2)
    throw std::invalid_argument("run_chain: too few observations for this AR order");
  const int d = 2 + p;
  Rng rng(cfg.seed);

  // U(0,1) starts, redrawn until the posterior is finite
  Eigen::VectorXd theta(d);
  double lp = -kInf;
  for (int attempt = 0; attempt < 100 && !std::isfinite(lp); ++attempt) {
    for (int c = 0; c < d; ++c) theta[c] = rng.uniform();
    lp = log_posterior(theta, data, p, prior);
  }
  if (!std::isfinite(lp))
    throw numeric_error("run_chain: no finite starting point in 100 draws");

  // cached pieces of the current state
  double h = std::sqrt(theta[0]);
  double b = std::sqrt(theta[1]);
  Eigen::VectorXd eps = data.residuals(h);
  Eigen::VectorXd eta = ar_filter(eps, theta.tail(p));
  Eigen::MatrixXd esq = sqdiff_matrix(eta);

  // sweep order: b^2, h^2, rho_1..rho_p
  std::vector<int> order;
  order.push_back(1);
  order.push_back(0);
  for (int j = 0; j < p; ++j) order.push_back(2 + j);

  Eigen::VectorXd taus = Eigen::VectorXd::Constant(d, cfg.tau0);
  Eigen::VectorXi accepts = Eigen::VectorXi::Zero(d);

  ChainSummary summary;
  summary.names = {"h2", "b2"};
  for (int j = 1; j <= p; ++j) summary.names.push_back("rho" + std::to_string(j));
  summary.draws.resize(cfg.keep, d);

  Eigen::VectorXd proposal = theta;
  for (int iter = 1; iter <= cfg.burn_in + cfg.keep; ++iter) {
    for (const int c : order) {
      proposal = theta;
      proposal[c] += taus[c] * rng.normal();
      const double u = rng.uniform();

      const double lprior = log_prior(proposal, p, prior);
      bool accepted = false;
      if (std::isfinite(lprior)) {
        double cand_lp;
        Eigen::VectorXd cand_eps, cand_eta;
        Eigen::MatrixXd cand_esq;
        if (c == 1) {  // b^2: residuals and innovations unchanged
          cand_lp = lprior + loglik_from_sqdiff(esq, std::sqrt(proposal[1]));
        } else if (c == 0) {  // h^2: recompute residuals onward
          cand_eps = data.residuals(std::sqrt(proposal[0]));
          cand_eta = ar_filter(cand_eps, proposal.tail(p));
          cand_esq = sqdiff_matrix(cand_eta);
          cand_lp = lprior + loglik_from_sqdiff(cand_esq, b);
        } else {  // rho_j: refilter the cached residuals
          cand_eta = ar_filter(eps, proposal.tail(p));
          cand_esq = sqdiff_matrix(cand_eta);
          cand_lp = lprior + loglik_from_sqdiff(cand_esq, b);
        }
        if (std::log(u) < cand_lp - lp) {
          accepted = true;
          lp = cand_lp;
          theta[c] = proposal[c];
          if (c == 0) {
            h = std::sqrt(theta[0]);
            eps = std::move(cand_eps);
            eta = std::move(cand_eta);
            esq = std::move(cand_esq);
          } else if (c == 1) {
            b = std::sqrt(theta[1]);
          } else {
            eta = std::move(cand_eta);
            esq = std::move(cand_esq);
          }
        }
      }
      // The k=1 gain makes a first-sweep rejection collapse tau to the floor
      // (step factor 1/(1-p) > 1), after which the 1/k annealing recovers too
      // slowly to hit the target acceptance rate; start the gain index at 2.
      taus[c] = robbins_monro_update(taus[c], accepted, std::max(iter, 2),
                                     cfg.p_target);
      if (iter > cfg.burn_in && accepted) ++accepts[c];
    }
    if (iter > cfg.burn_in) summary.draws.row(iter - cfg.burn_in - 1) = theta;
  }

  summary.params.resize(d);
  std::vector<ParamSummary> diag;
  if (cfg.keep >= 100) diag = chain_diagnostics(summary.draws);
  for (int c = 0; c < d; ++c) {
    ParamSummary& s = summary.params[c];
    if (!diag.empty()) {
      s = diag[c];
    } else {
      // too few kept draws for meaningful diagnostics
      s.se = s.batch_se = s.sif = s.geweke_z =
          std::numeric_limits<double>::quiet_NaN();
    }
    s.name = summary.names[c];
    Eigen::VectorXd col = summary.draws.col(c);
    s.mean = col.mean();
    std::sort(col.data(), col.data() + col.size());
    s.lower = quantile_sorted(col, 0.025);
    s.upper = quantile_sorted(col, 0.975);
    s.accept_rate = static_cast<double>(accepts[c]) / cfg.keep;
    s.final_tau = taus[c];
  }
  return summary;
}

}  // namespace fsim
