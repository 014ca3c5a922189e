#include "fsim/error_model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsim {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
constexpr double kStationaryMargin = 1e-10;
}  // namespace

Eigen::VectorXd ar_filter(const Eigen::VectorXd& eps, const Eigen::VectorXd& rho) {
  const int p = static_cast<int>(rho.size());
  const int n = static_cast<int>(eps.size());
  if (n - p < 1)
    throw std::invalid_argument("ar_filter: series shorter than the AR order");
  if (p == 0) return eps;
  if (!ar_stationary(rho))
    throw std::invalid_argument("ar_filter: rho is not stationary");
  Eigen::VectorXd eta(n - p);
  for (int j = p; j < n; ++j) {
    double v = eps[j];
    for (int w = 1; w <= p; ++w) v -= rho[w - 1] * eps[j - w];
    eta[j - p] = v;
  }
  return eta;
}

bool ar_stationary(const Eigen::VectorXd& rho) {
  const int p = static_cast<int>(rho.size());
  if (p == 0) return true;
  for (int i = 0; i < p; ++i)
    if (!std::isfinite(rho[i])) return false;
  if (p == 1) return std::abs(rho[0]) < 1.0 - kStationaryMargin;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  companion.row(0) = rho.transpose();
  for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd roots = companion.eigenvalues();
  for (int i = 0; i < p; ++i)
    if (std::abs(roots[i]) >= 1.0 - kStationaryMargin) return false;
  return true;
}

double ar1_covariance(double sigma2, double rho, int lag) {
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("ar1_covariance: |rho| must be < 1");
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("ar1_covariance: sigma2 must be >= 0");
  return sigma2 * std::pow(rho, std::abs(lag)) / (1.0 - rho * rho);
}

double ar_marginal_sd_ratio(const Eigen::VectorXd& rho) {
  const int p = static_cast<int>(rho.size());
  if (p == 0) return 1.0;
  if (!ar_stationary(rho))
    throw std::invalid_argument("ar_marginal_sd_ratio: rho is not stationary");
  if (p == 1) return 1.0 / std::sqrt(1.0 - rho[0] * rho[0]);

  // Yule-Walker for the autocovariances gamma_0..gamma_p with unit
  // innovation variance: gamma_j - sum_i rho_i gamma_{|j-i|} = (j == 0).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p + 1, p + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
  b[0] = 1.0;
  for (int j = 0; j <= p; ++j) {
    a(j, j) += 1.0;
    for (int i = 1; i <= p; ++i) a(j, std::abs(j - i)) -= rho[i - 1];
  }
  const Eigen::VectorXd gamma = a.fullPivLu().solve(b);
  return std::sqrt(gamma[0]);
}

double error_density_pdf(const KernelErrorDensity& d, double x) {
  const int m = static_cast<int>(d.centers.size());
  if (m < 1) throw std::invalid_argument("error_density_pdf: no centers");
  if (!(d.b > 0.0)) throw std::invalid_argument("error_density_pdf: b must be > 0");
  const Eigen::ArrayXd u = (x - d.centers.array()) / d.b;
  const double s = (-0.5 * u.square()).exp().sum();
  return s / (m * d.b * std::sqrt(2.0 * M_PI));
}

Eigen::VectorXd error_density_pdf(const KernelErrorDensity& d,
                                  const Eigen::VectorXd& xs) {
  Eigen::VectorXd out(xs.size());
  for (int i = 0; i < xs.size(); ++i) out[i] = error_density_pdf(d, xs[i]);
  return out;
}

double log_kernel_likelihood(const Eigen::VectorXd& eps, double b,
                             const Eigen::VectorXd& rho) {
  if (!(b > 0.0)) throw std::invalid_argument("log_kernel_likelihood: b must be > 0");
  const Eigen::VectorXd eta = ar_filter(eps, rho);
  const int m = static_cast<int>(eta.size());
  if (m < 2)
    throw std::invalid_argument("log_kernel_likelihood: needs >= 2 innovations");

  const double log_norm = std::log(static_cast<double>(m - 1)) + std::log(b) +
                          0.5 * kLog2Pi;
  const double inv2b2 = 1.0 / (2.0 * b * b);
  double ll = 0.0;
  for (int i = 0; i < m; ++i) {
    // leave-one-out mixture, log-sum-exp with max subtraction
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double diff = eta[i] - eta[j];
      const double e = -diff * diff * inv2b2;
      if (e > mx) mx = e;
    }
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double diff = eta[i] - eta[j];
      s += std::exp(-diff * diff * inv2b2 - mx);
    }
    ll += mx + std::log(s) - log_norm;
  }
  return ll;
}

}  // namespace fsim
