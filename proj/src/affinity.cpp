#include "spheresne/affinity.hpp"

#include <cmath>
#include <limits>

#include "spheresne/errors.hpp"
#include "spheresne/vmf.hpp"

namespace spheresne::affinity {

namespace {

constexpr double kKappaLo = 1e-4;
constexpr double kKappaHi = 1e6;
constexpr double kPerplexityRelTol = 1e-4;
constexpr int kMaxBisection = 100;

void check_unit_rows(const Eigen::MatrixXd& m, const char* who) {
  for (int i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).norm() - 1.0) > 1e-9) {
      throw validation_error(std::string(who) + ": row " + std::to_string(i) +
                             " is not unit norm");
    }
  }
}

}  // namespace

Eigen::VectorXd conditional_row_from_sims(int i, const Eigen::VectorXd& sims,
                                          double kappa_i) {
  const auto n = sims.size();
  if (n < 2) throw validation_error("conditional_row: need N >= 2");
  double s = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) s = std::max(s, kappa_i * sims(j));
  }
  Eigen::VectorXd row(n);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    row(j) = (j == i) ? 0.0 : std::exp(kappa_i * sims(j) - s);
    total += row(j);
  }
  row /= total;
  return row;
}

Eigen::VectorXd conditional_row(int i, const Eigen::MatrixXd& data,
                                double kappa_i) {
  if (i < 0 || i >= data.rows()) throw validation_error("conditional_row: bad index");
  check_unit_rows(data, "conditional_row");
  const Eigen::VectorXd sims = data * data.row(i).transpose();
  return conditional_row_from_sims(i, sims, kappa_i);
}

double row_perplexity(const Eigen::VectorXd& row) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row(j) < 0.0) throw validation_error("row_perplexity: negative entry");
    sum += row(j);
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw validation_error("row_perplexity: row does not sum to 1");
  }
  double h = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row(j) > 0.0) h -= row(j) * std::log2(row(j));
  }
  return std::exp2(h);
}

CalibrationResult calibrate_kappas(const Eigen::MatrixXd& data,
                                   double target_perplexity) {
  const auto n = data.rows();
  if (n < 2) throw validation_error("calibrate_kappas: need N >= 2");
  if (!(target_perplexity > 1.0) || !(target_perplexity < static_cast<double>(n))) {
    throw validation_error("calibrate_kappas: perplexity must lie in (1, N)");
  }
  check_unit_rows(data, "calibrate_kappas");

  const Eigen::MatrixXd gram = data * data.transpose();

  CalibrationResult res;
  res.kappas.resize(n);
  res.achieved_perplexity.resize(n);
  res.iterations.assign(n, 0);
  res.converged.assign(n, false);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd sims = gram.row(i);
    auto perp_at = [&](double kappa) {
      return row_perplexity(conditional_row_from_sims(static_cast<int>(i), sims, kappa));
    };

    double lo = kKappaLo, hi = kKappaHi;
    double perp_lo = perp_at(lo);
    double perp_hi = perp_at(hi);

    // flat row: perplexity does not respond to kappa
    if (std::abs(perp_lo - perp_hi) < 1e-9 * perp_lo) {
      res.kappas(i) = 0.5 * (lo + hi);
      res.achieved_perplexity(i) = perp_lo;
      continue;
    }
    // perplexity decreases in kappa; expand the bracket if the target
    // falls outside of it
    int expand = 0;
    while (perp_lo < target_perplexity && expand++ < 10) {
      lo *= 0.1;
      perp_lo = perp_at(lo);
    }
    expand = 0;
    while (perp_hi > target_perplexity && expand++ < 10) {
      hi *= 10.0;
      perp_hi = perp_at(hi);
    }
    if (perp_lo < target_perplexity || perp_hi > target_perplexity) {
      const double best = (perp_lo < target_perplexity) ? lo : hi;
      res.kappas(i) = best;
      res.achieved_perplexity(i) = perp_at(best);
      continue;
    }

    double kappa = 0.5 * (lo + hi), achieved = perp_at(kappa);
    int it = 0;
    while (it < kMaxBisection &&
           std::abs(achieved - target_perplexity) >
               kPerplexityRelTol * target_perplexity) {
      if (achieved > target_perplexity) {
        lo = kappa;
      } else {
        hi = kappa;
      }
      kappa = 0.5 * (lo + hi);
      achieved = perp_at(kappa);
      ++it;
    }
    res.kappas(i) = kappa;
    res.achieved_perplexity(i) = achieved;
    res.iterations[i] = it;
    res.converged[i] = std::abs(achieved - target_perplexity) <=
                       kPerplexityRelTol * target_perplexity;
  }
  return res;
}

Eigen::MatrixXd joint_p(const Eigen::MatrixXd& data,
                        const CalibrationResult& calib) {
  const auto n = data.rows();
  if (calib.kappas.size() != n) {
    throw validation_error("joint_p: calibration does not match data");
  }
  const Eigen::MatrixXd gram = data * data.transpose();
  Eigen::MatrixXd cond(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cond.row(i) = conditional_row_from_sims(static_cast<int>(i), gram.row(i),
                                            calib.kappas(i))
                      .transpose();
  }
  Eigen::MatrixXd p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  p.diagonal().setZero();
  return p;
}

Eigen::MatrixXd joint_q(const Eigen::MatrixXd& Y, double kappa) {
  const auto n = Y.rows();
  if (n < 2) throw validation_error("joint_q: need N >= 2");
  check_unit_rows(Y, "joint_q");

  Eigen::MatrixXd sims = kappa * (Y * Y.transpose());
  double s = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) s = std::max(s, sims(i, j));
    }
  }
  Eigen::MatrixXd q(n, n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      q(i, j) = (i == j) ? 0.0 : std::exp(sims(i, j) - s);
      total += q(i, j);
    }
  }
  q /= total;
  return q;
}

}  // namespace spheresne::affinity
