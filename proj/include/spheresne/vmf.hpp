#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace spheresne::vmf {

// Parameters of a von Mises-Fisher distribution on S^{d-1}:
// f_d(x; mu, kappa) = C_d(kappa) * exp(kappa * mu'x), ||mu|| = ||x|| = 1.
struct VmfParams {
  Eigen::VectorXd mu;  // unit mean direction
  double kappa = 1.0;  // concentration, > 0

  VmfParams(Eigen::VectorXd mean, double concentration);
};

// ln I_nu(x), modified Bessel function of the first kind, nu >= 0, x > 0.
// Log-space power series for moderate arguments, large-argument asymptotic
// expansion beyond; never forms I_nu itself, so large d / kappa do not
// overflow or underflow.
double log_bessel_i(double nu, double x);

// ln C_d(kappa) = (d/2 - 1) ln kappa - (d/2) ln(2 pi) - ln I_{d/2-1}(kappa).
double log_norm_const(int d, double kappa);

// ln f_d(x; mu, kappa) = ln C_d(kappa) + kappa * mu'x.
double log_density(const Eigen::VectorXd& x, const VmfParams& p);

// A_d(kappa) = I_{d/2}(kappa) / I_{d/2-1}(kappa) = E[mu'x], in (0, 1).
double mean_resultant_length(int d, double kappa);

// n i.i.d. draws from vMF(mu, kappa), one per row. Wood (1994) rejection
// sampling of the tangent weight plus a uniform tangential direction,
// rotated so e1 maps to mu by a Householder reflection.
Eigen::MatrixXd sample_vmf(const VmfParams& p, int n, std::uint64_t seed);

// n uniform draws on S^{d-1}, one per row (normalized Gaussian vectors).
Eigen::MatrixXd sample_uniform_sphere(int d, int n, std::uint64_t seed);

// Checks ||v|| = 1 within tol.
bool is_unit(const Eigen::VectorXd& v, double tol = 1e-9);

}  // namespace spheresne::vmf
