#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spheresne/errors.hpp"
#include "spheresne/vmf.hpp"

using namespace spheresne;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ln C_3(kappa) = ln(kappa / (4 pi sinh kappa)), written to survive large kappa
double log_c3_closed_form(double kappa) {
  const double log_sinh = kappa + std::log1p(-std::exp(-2.0 * kappa)) - std::log(2.0);
  return std::log(kappa) - std::log(4.0 * kPi) - log_sinh;
}

// I_0(x) by direct series, independent of the implementation under test
double bessel_i0_series(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (x * x / 4.0) / (k * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double a3_closed_form(double kappa) { return 1.0 / std::tanh(kappa) - 1.0 / kappa; }

Eigen::VectorXd unit(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x(i++) = c;
  return x / x.norm();
}

}  // namespace

TEST_CASE("log_norm_const matches the d=3 closed form") {
  for (double kappa : {0.1, 1.0, 2.0, 10.0, 100.0}) {
    const double expected = log_c3_closed_form(kappa);
    CHECK(vmf::log_norm_const(3, kappa) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("log_norm_const matches the d=2 series oracle") {
  for (double kappa : {0.3, 1.0, 5.0}) {
    const double expected = -std::log(2.0 * kPi * bessel_i0_series(kappa));
    CHECK(vmf::log_norm_const(2, kappa) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("log_norm_const is finite where naive Bessel underflows") {
  // d = 50, moderate kappa: I_24(kappa) itself is ~1e-40
  CHECK(std::isfinite(vmf::log_norm_const(50, 5.0)));
  CHECK(std::isfinite(vmf::log_norm_const(50, 2000.0)));
}

TEST_CASE("log_norm_const rejects bad parameters") {
  CHECK_THROWS_AS(vmf::log_norm_const(1, 1.0), validation_error);
  CHECK_THROWS_AS(vmf::log_norm_const(3, 0.0), validation_error);
  CHECK_THROWS_AS(vmf::log_norm_const(3, -2.0), validation_error);
}

TEST_CASE("log_density at the mean, antipode, and under rotation") {
  const vmf::VmfParams p(unit({1.0, 2.0, -0.5}), 3.0);
  const double lc = vmf::log_norm_const(3, 3.0);
  CHECK(vmf::log_density(p.mu, p) == doctest::Approx(lc + 3.0).epsilon(1e-12));
  CHECK(vmf::log_density(Eigen::VectorXd(-p.mu), p) ==
        doctest::Approx(lc - 3.0).epsilon(1e-12));

  // orthogonal R from the QR of a fixed matrix
  Eigen::MatrixXd m(3, 3);
  m << 0.3, -1.2, 0.7, 2.1, 0.4, -0.9, -0.6, 1.5, 0.2;
  const Eigen::MatrixXd R = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  const Eigen::VectorXd x = unit({-0.2, 0.9, 0.4});
  const vmf::VmfParams rotated(Eigen::VectorXd((R * p.mu).normalized()), 3.0);
  CHECK(vmf::log_density(Eigen::VectorXd((R * x).normalized()), rotated) ==
        doctest::Approx(vmf::log_density(x, p)).epsilon(1e-9));

  Eigen::VectorXd wrong_dim = unit({1.0, 0.0});
  CHECK_THROWS_AS(vmf::log_density(wrong_dim, p), validation_error);
}

TEST_CASE("exp(log_density) integrates to 1 on the circle") {
  // d = 2: trapezoidal quadrature of C_2(kappa) exp(kappa cos theta)
  for (double kappa : {0.5, 2.0, 10.0}) {
    const double lc = vmf::log_norm_const(2, kappa);
    const int n = 20000;
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = 2.0 * kPi * i / n;
      integral += std::exp(lc + kappa * std::cos(theta));
    }
    integral *= 2.0 * kPi / n;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("mean_resultant_length matches the d=3 closed form") {
  CHECK(vmf::mean_resultant_length(3, 1.0) ==
        doctest::Approx(a3_closed_form(1.0)).epsilon(1e-10));
  CHECK(vmf::mean_resultant_length(3, 40.0) ==
        doctest::Approx(a3_closed_form(40.0)).epsilon(1e-10));
  CHECK(a3_closed_form(1.0) == doctest::Approx(0.3130).epsilon(1e-4));
}

TEST_CASE("mean_resultant_length is increasing in kappa and below 1") {
  for (int d : {2, 3, 10, 50}) {
    double prev = 0.0;
    for (double kappa : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
      const double a = vmf::mean_resultant_length(d, kappa);
      CHECK(a > prev);
      CHECK(a < 1.0);
      prev = a;
    }
  }
}

TEST_CASE("sample_vmf returns unit vectors and is seed deterministic") {
  const vmf::VmfParams p(unit({1.0, -1.0, 2.0, 0.5}), 8.0);
  const Eigen::MatrixXd a = vmf::sample_vmf(p, 200, 42);
  const Eigen::MatrixXd b = vmf::sample_vmf(p, 200, 42);
  CHECK(a == b);
  CHECK(vmf::sample_vmf(p, 10, 43) != a.topRows(10));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    CHECK(std::abs(a.row(i).norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("sample_vmf empirical mean dot matches the Bessel ratio") {
  const int d = 50, n = 10000;
  const double kappa = 15.0;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
  mu(0) = 0.6;
  mu(7) = -0.8;
  const vmf::VmfParams p(mu, kappa);
  const Eigen::MatrixXd samples = vmf::sample_vmf(p, n, 7);
  const Eigen::VectorXd dots = samples * p.mu;
  const double mean = dots.mean();
  const double sd = std::sqrt((dots.array() - mean).square().sum() / (n - 1));
  const double se = sd / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - vmf::mean_resultant_length(d, kappa)) < 3.0 * se);
}

TEST_CASE("sample_vmf concentrates tightly at kappa = 1000") {
  const vmf::VmfParams p(unit({0.0, 0.0, 1.0}), 1000.0);
  const Eigen::MatrixXd samples = vmf::sample_vmf(p, 100, 11);
  CHECK((samples * p.mu).minCoeff() > 0.99);
}

TEST_CASE("sample_vmf empirical mean direction aligns with mu") {
  // sanity band: normalized sample mean has dot with mu above 1 - 5/(kappa n)
  const vmf::VmfParams p(unit({1.0, 1.0, 1.0, 1.0, 1.0}), 50.0);
  const Eigen::MatrixXd samples = vmf::sample_vmf(p, 2000, 3);
  const Eigen::VectorXd mean_dir = samples.colwise().mean().normalized();
  CHECK(mean_dir.dot(p.mu) > 1.0 - 5.0 / (50.0 * 2000.0));
}

TEST_CASE("sample_uniform_sphere basics") {
  const Eigen::MatrixXd a = vmf::sample_uniform_sphere(2, 100000, 5);
  const Eigen::MatrixXd b = vmf::sample_uniform_sphere(2, 100000, 5);
  CHECK(a == b);
  for (Eigen::Index i = 0; i < 100; ++i) {
    CHECK(std::abs(a.row(i).norm() - 1.0) <= 1e-9);
  }
  CHECK(std::abs(a.col(0).mean()) < 0.01);
  CHECK_THROWS_AS(vmf::sample_uniform_sphere(1, 10, 0), validation_error);
  CHECK_THROWS_AS(vmf::sample_uniform_sphere(3, 0, 0), validation_error);
}

TEST_CASE("VmfParams validates its invariants") {
  Eigen::VectorXd not_unit(3);
  not_unit << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(vmf::VmfParams(not_unit, 1.0), validation_error);
  CHECK_THROWS_AS(vmf::VmfParams(unit({1.0, 0.0, 0.0}), -1.0), validation_error);
}
