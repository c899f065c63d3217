#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spheresne/affinity.hpp"
#include "spheresne/errors.hpp"
#include "spheresne/vmf.hpp"

using namespace spheresne;

namespace {

// three unit vectors with x1'x2 = 0.9 and x1'x3 = 0.1
Eigen::MatrixXd dot_prescribed_triple() {
  Eigen::MatrixXd x(3, 3);
  x.row(0) << 1.0, 0.0, 0.0;
  x.row(1) << 0.9, std::sqrt(1.0 - 0.81), 0.0;
  x.row(2) << 0.1, 0.0, std::sqrt(1.0 - 0.01);
  return x;
}

void check_affinity_invariants(const Eigen::MatrixXd& m, double tol = 1e-9) {
  CHECK(m.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= tol);
  CHECK(m.minCoeff() >= 0.0);
  CHECK(m.sum() == doctest::Approx(1.0).epsilon(tol));
}

}  // namespace

TEST_CASE("conditional_row trivial cases") {
  Eigen::MatrixXd two(2, 2);
  two.row(0) << 1.0, 0.0;
  two.row(1) << 0.0, 1.0;
  const Eigen::VectorXd row = affinity::conditional_row(0, two, 3.7);
  CHECK(row(0) == 0.0);
  CHECK(row(1) == doctest::Approx(1.0).epsilon(1e-15));

  // equal pairwise dot products: orthonormal basis rows give a uniform row
  const Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(5, 5);
  const Eigen::VectorXd uniform = affinity::conditional_row(2, basis, 1.3);
  for (int j = 0; j < 5; ++j) {
    if (j == 2) continue;
    CHECK(uniform(j) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("conditional_row two-term oracle") {
  const Eigen::MatrixXd x = dot_prescribed_triple();
  const Eigen::VectorXd row = affinity::conditional_row(0, x, 2.0);
  const double expected = std::exp(1.8) / (std::exp(1.8) + std::exp(0.2));
  CHECK(row(1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(row(2) == doctest::Approx(1.0 - expected).epsilon(1e-12));
}

TEST_CASE("conditional_row survives extreme kappa") {
  const Eigen::MatrixXd x = dot_prescribed_triple();
  const Eigen::VectorXd row = affinity::conditional_row(0, x, 1e6);
  CHECK(std::isfinite(row.sum()));
  CHECK(row.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(row(1) > 0.999);  // the 0.9-dot neighbor takes everything
}

TEST_CASE("conditional_row is rotation invariant") {
  const Eigen::MatrixXd x = vmf::sample_uniform_sphere(6, 12, 9);
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(6, 6);
  const Eigen::MatrixXd R = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  Eigen::MatrixXd xr = x * R.transpose();
  for (Eigen::Index i = 0; i < xr.rows(); ++i) xr.row(i) /= xr.row(i).norm();
  const Eigen::VectorXd a = affinity::conditional_row(4, x, 7.0);
  const Eigen::VectorXd b = affinity::conditional_row(4, xr, 7.0);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("conditional_row determinism") {
  const Eigen::MatrixXd x = vmf::sample_uniform_sphere(4, 10, 2);
  CHECK(affinity::conditional_row(3, x, 2.5) == affinity::conditional_row(3, x, 2.5));
}

TEST_CASE("row_perplexity examples") {
  Eigen::VectorXd uniform(5);
  uniform << 0.0, 0.25, 0.25, 0.25, 0.25;
  CHECK(affinity::row_perplexity(uniform) == doctest::Approx(4.0).epsilon(1e-12));

  Eigen::VectorXd one_hot(4);
  one_hot << 0.0, 1.0, 0.0, 0.0;
  CHECK(affinity::row_perplexity(one_hot) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::VectorXd mixed(3);
  mixed << 0.5, 0.25, 0.25;
  CHECK(affinity::row_perplexity(mixed) ==
        doctest::Approx(std::exp2(1.5)).epsilon(1e-12));

  Eigen::VectorXd not_normalized(2);
  not_normalized << 0.5, 0.2;
  CHECK_THROWS_AS(affinity::row_perplexity(not_normalized), validation_error);
}

TEST_CASE("calibrate_kappas matches a fine grid scan on a 3-point instance") {
  const Eigen::MatrixXd x = dot_prescribed_triple();
  const double target = 1.5;
  const auto calib = affinity::calibrate_kappas(x, target);

  // independent scan of kappa for point 0, step 1e-4 around the optimum
  double best_kappa = 0.0, best_err = 1e30;
  for (double kappa = 1e-4; kappa < 40.0; kappa += 1e-4) {
    const double perp =
        affinity::row_perplexity(affinity::conditional_row(0, x, kappa));
    const double err = std::abs(perp - target);
    if (err < best_err) {
      best_err = err;
      best_kappa = kappa;
    }
  }
  CHECK(calib.kappas(0) == doctest::Approx(best_kappa).epsilon(1e-3));
  CHECK(calib.converged[0]);
  CHECK(std::abs(calib.achieved_perplexity(0) - target) <= 1e-4 * target);
}

TEST_CASE("calibrated kappa weakly decreases as perplexity grows") {
  const Eigen::MatrixXd x = vmf::sample_uniform_sphere(8, 50, 17);
  Eigen::VectorXd prev;
  for (double perplexity : {5.0, 10.0, 20.0, 40.0}) {
    const auto calib = affinity::calibrate_kappas(x, perplexity);
    if (prev.size() > 0) {
      for (Eigen::Index i = 0; i < prev.size(); ++i) {
        CHECK(calib.kappas(i) <= prev(i) + 1e-9);
      }
    }
    prev = calib.kappas;
  }
}

TEST_CASE("calibrate_kappas flags flat rows") {
  Eigen::MatrixXd x(4, 3);
  for (int i = 0; i < 4; ++i) x.row(i) << 1.0, 0.0, 0.0;  // duplicated points
  const auto calib = affinity::calibrate_kappas(x, 2.0);
  for (int i = 0; i < 4; ++i) {
    CHECK_FALSE(calib.converged[i]);
    CHECK(calib.kappas(i) == doctest::Approx(0.5 * (1e-4 + 1e6)));
    CHECK(calib.achieved_perplexity(i) == doctest::Approx(3.0));  // N - 1
  }
}

TEST_CASE("calibrate_kappas validates the perplexity range") {
  const Eigen::MatrixXd x = vmf::sample_uniform_sphere(3, 5, 1);
  CHECK_THROWS_AS(affinity::calibrate_kappas(x, 1.0), validation_error);
  CHECK_THROWS_AS(affinity::calibrate_kappas(x, 5.0), validation_error);
}

TEST_CASE("joint_p trivial and oracle cases") {
  Eigen::MatrixXd two(2, 2);
  two.row(0) << 1.0, 0.0;
  two.row(1) << 0.0, 1.0;
  affinity::CalibrationResult calib;
  calib.kappas = Eigen::VectorXd::Constant(2, 1.0);
  const Eigen::MatrixXd p2 = affinity::joint_p(two, calib);
  CHECK(p2(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p2(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  check_affinity_invariants(p2);

  // asymmetric conditionals: entrywise (p_{i|j} + p_{j|i}) / 6
  const Eigen::MatrixXd x = dot_prescribed_triple();
  affinity::CalibrationResult c3;
  c3.kappas = Eigen::VectorXd(3);
  c3.kappas << 2.0, 0.7, 5.0;
  const Eigen::MatrixXd p3 = affinity::joint_p(x, c3);
  Eigen::MatrixXd cond(3, 3);
  for (int i = 0; i < 3; ++i) {
    cond.row(i) = affinity::conditional_row(i, x, c3.kappas(i)).transpose();
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = (i == j) ? 0.0 : (cond(i, j) + cond(j, i)) / 6.0;
      CHECK(p3(i, j) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  check_affinity_invariants(p3);
}

TEST_CASE("joint_q trivial and oracle cases") {
  Eigen::MatrixXd two(2, 2);
  two.row(0) << 1.0, 0.0;
  two.row(1) << 0.0, 1.0;
  const Eigen::MatrixXd q2 = affinity::joint_q(two, 2.0);
  CHECK(q2(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

  // equal pairwise dots -> six equal ordered-pair terms
  const Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd q3 = affinity::joint_q(basis, 4.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(q3(i, j) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
  }

  // naive double loop without stabilization
  const Eigen::MatrixXd y = vmf::sample_uniform_sphere(3, 4, 23);
  const Eigen::MatrixXd q4 = affinity::joint_q(y, 2.0);
  double z = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      if (m != n) z += std::exp(2.0 * y.row(m).dot(y.row(n)));
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expected =
          (i == j) ? 0.0 : std::exp(2.0 * y.row(i).dot(y.row(j))) / z;
      CHECK(std::abs(q4(i, j) - expected) <= 1e-10);
    }
  }
  check_affinity_invariants(q4);
}

TEST_CASE("joint_p and joint_q invariants hold on random data") {
  std::mt19937_64 mix(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(mix() % 49);
    const int d = 2 + static_cast<int>(mix() % 49);
    const Eigen::MatrixXd x = vmf::sample_uniform_sphere(d, n, mix());
    const auto calib = affinity::calibrate_kappas(x, 1.0 + 0.5 * (n - 1));
    check_affinity_invariants(affinity::joint_p(x, calib));

    const Eigen::MatrixXd y = vmf::sample_uniform_sphere(3, n, mix());
    check_affinity_invariants(affinity::joint_q(y, 2.0));
  }
}

TEST_CASE("joint_q rejects non-unit rows") {
  Eigen::MatrixXd y(2, 2);
  y.row(0) << 1.0, 0.0;
  y.row(1) << 2.0, 0.0;
  CHECK_THROWS_AS(affinity::joint_q(y, 1.0), validation_error);
}
