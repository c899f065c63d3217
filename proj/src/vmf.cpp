#include "spheresne/vmf.hpp"

#include <cmath>
#include <limits>

#include "spheresne/errors.hpp"
#include "spheresne/rng.hpp"

namespace spheresne::vmf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Convergent series ln I_nu(x) = lse_k [ (nu+2k) ln(x/2) - lg(k+1) - lg(nu+k+1) ],
// accumulated as a running log-sum-exp so individual terms may exceed the
// double range.
double log_bessel_series(double nu, double x) {
  const double lh = std::log(0.5 * x);
  double acc = -std::numeric_limits<double>::infinity();
  double peak = acc;
  for (int k = 0; k < 100000; ++k) {
    const double term =
        (nu + 2.0 * k) * lh - std::lgamma(k + 1.0) - std::lgamma(nu + k + 1.0);
    if (term > acc) {
      acc = term + std::log1p(std::exp(acc - term));
    } else {
      acc += std::log1p(std::exp(term - acc));
    }
    peak = std::max(peak, term);
    // terms grow until k ~ x/2, then decay factorially
    if (k > 0.5 * x + 5.0 && term < peak - 40.0) break;
  }
  return acc;
}

// Large-argument expansion I_nu(x) ~ e^x/sqrt(2 pi x) * sum_k a_k(nu)/x^k,
// a_k = prod_{j=1..k} -(4nu^2-(2j-1)^2)/(8j). Requires x >> nu^2.
double log_bessel_asymptotic(double nu, double x) {
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 20; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu4 - odd * odd) / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-16 * sum) break;
  }
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(sum);
}

}  // namespace

double log_bessel_i(double nu, double x) {
  if (!(nu >= 0.0) || !(x > 0.0)) {
    throw validation_error("log_bessel_i: need nu >= 0 and x > 0");
  }
  // the asymptotic branch needs x beyond nu^2 for its terms to decay
  if (x > 700.0 && x > 4.0 * nu * nu) return log_bessel_asymptotic(nu, x);
  return log_bessel_series(nu, x);
}

double log_norm_const(int d, double kappa) {
  if (d < 2) throw validation_error("log_norm_const: d must be >= 2");
  if (!(kappa > 0.0)) throw validation_error("log_norm_const: kappa must be > 0");
  const double half_d = 0.5 * d;
  return (half_d - 1.0) * std::log(kappa) - half_d * std::log(2.0 * kPi) -
         log_bessel_i(half_d - 1.0, kappa);
}

bool is_unit(const Eigen::VectorXd& v, double tol) {
  return std::abs(v.norm() - 1.0) <= tol;
}

VmfParams::VmfParams(Eigen::VectorXd mean, double concentration)
    : mu(std::move(mean)), kappa(concentration) {
  if (mu.size() < 2) throw validation_error("VmfParams: dimension must be >= 2");
  if (!(kappa > 0.0)) throw validation_error("VmfParams: kappa must be > 0");
  if (!is_unit(mu)) throw validation_error("VmfParams: mu must be unit norm");
}

double log_density(const Eigen::VectorXd& x, const VmfParams& p) {
  if (x.size() != p.mu.size()) {
    throw validation_error("log_density: dimension mismatch");
  }
  return log_norm_const(static_cast<int>(x.size()), p.kappa) +
         p.kappa * p.mu.dot(x);
}

double mean_resultant_length(int d, double kappa) {
  if (d < 2) throw validation_error("mean_resultant_length: d must be >= 2");
  if (!(kappa > 0.0)) {
    throw validation_error("mean_resultant_length: kappa must be > 0");
  }
  const double nu = 0.5 * d - 1.0;
  return std::exp(log_bessel_i(nu + 1.0, kappa) - log_bessel_i(nu, kappa));
}

Eigen::MatrixXd sample_uniform_sphere(int d, int n, std::uint64_t seed) {
  if (d < 2) throw validation_error("sample_uniform_sphere: d must be >= 2");
  if (n < 1) throw validation_error("sample_uniform_sphere: n must be >= 1");
  auto rng = make_rng(seed, RngStream::kUniformSphere);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd out(n, d);
  for (int i = 0; i < n; ++i) {
    double nrm = 0.0;
    do {
      for (int j = 0; j < d; ++j) out(i, j) = gauss(rng);
      nrm = out.row(i).norm();
    } while (nrm < 1e-12);
    out.row(i) /= nrm;
  }
  return out;
}

Eigen::MatrixXd sample_vmf(const VmfParams& p, int n, std::uint64_t seed) {
  if (n < 1) throw validation_error("sample_vmf: n must be >= 1");
  const int d = static_cast<int>(p.mu.size());
  const double kappa = p.kappa;

  // Wood (1994) envelope constants for the tangent weight w = mu'x
  const double b =
      (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + (d - 1.0) * (d - 1.0))) /
      (d - 1.0);
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + (d - 1.0) * std::log(1.0 - x0 * x0);

  auto rng = make_rng(seed, RngStream::kVmfSampler);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::gamma_distribution<double> gamma_half((d - 1.0) / 2.0, 1.0);

  // Householder vector mapping e1 -> mu (skipped when mu is already e1)
  Eigen::VectorXd hh = -p.mu;
  hh(0) += 1.0;
  const double hh_norm = hh.norm();
  const bool reflect = hh_norm > 1e-12;
  if (reflect) hh /= hh_norm;

  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd v(d - 1), x(d);
  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    for (;;) {
      const double g1 = gamma_half(rng);
      const double g2 = gamma_half(rng);
      const double z = g1 / (g1 + g2);  // Beta((d-1)/2, (d-1)/2)
      w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
      const double u = unif(rng);
      if (kappa * w + (d - 1.0) * std::log(1.0 - x0 * w) - c >= std::log(u)) {
        break;
      }
    }
    double vn = 0.0;
    do {
      for (int j = 0; j < d - 1; ++j) v(j) = gauss(rng);
      vn = v.norm();
    } while (vn < 1e-12);
    v /= vn;

    x(0) = w;
    x.tail(d - 1) = std::sqrt(std::max(0.0, 1.0 - w * w)) * v;
    if (reflect) x -= 2.0 * hh.dot(x) * hh;
    out.row(i) = x / x.norm();
  }
  return out;
}

}  // namespace spheresne::vmf
