#pragma once

#include <Eigen/Dense>

namespace fsim {

// Innovations of an AR(p) error sequence: eta_j = eps_j - sum_w rho_w eps_{j-w}
// for j = p..n-1 (returns n - p values). rho may be empty (p = 0: eta = eps).
Eigen::VectorXd ar_filter(const Eigen::VectorXd& eps, const Eigen::VectorXd& rho);

// Stationarity of the AR polynomial: all companion-matrix eigenvalues have
// modulus < 1 (strictly, with a 1e-10 margin). Empty rho is stationary.
bool ar_stationary(const Eigen::VectorXd& rho);

// Stationary AR(1) autocovariance sigma2 * rho^{|lag|} / (1 - rho^2),
// where sigma2 is the innovation variance. |rho| < 1.
double ar1_covariance(double sigma2, double rho, int lag);

// Ratio sigma_eps / sigma_eta between the marginal error sd and the
// innovation sd of a stationary AR(p) process (1 for p = 0; 1/sqrt(1-rho^2)
// for p = 1; Yule-Walker solve for p >= 2).
double ar_marginal_sd_ratio(const Eigen::VectorXd& rho);

// Error density in kernel form: a location mixture of normals with common
// sd b centred at the filtered innovations. Symmetric around the centre set's
// reflection; integrates to one.
struct KernelErrorDensity {
  Eigen::VectorXd centers;  // innovations eta
  double b = 1.0;           // mixture bandwidth, > 0
};

double error_density_pdf(const KernelErrorDensity& d, double x);
Eigen::VectorXd error_density_pdf(const KernelErrorDensity& d, const Eigen::VectorXd& xs);

// Log likelihood of residuals eps under the kernel-form error density with
// AR coefficients rho: the innovations eta = ar_filter(eps, rho) each get a
// leave-one-out mixture term
//   log f(eta_i) = log( (1/(n-p-1)) sum_{j != i} phi_b(eta_i - eta_j) ),
// summed over i, computed in log space with max-subtraction (finite for any
// b > 0 provided the innovations are not all identical).
// Pre: eps.size() - rho.size() >= 2, b > 0.
double log_kernel_likelihood(const Eigen::VectorXd& eps, double b,
                             const Eigen::VectorXd& rho);

}  // namespace fsim
