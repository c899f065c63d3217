#include "spheresne/tsne.hpp"

#include <cmath>
#include <limits>

#include "spheresne/affinity.hpp"
#include "spheresne/errors.hpp"
#include "spheresne/optimizer.hpp"
#include "spheresne/rng.hpp"

namespace spheresne::tsne {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X) {
  const Eigen::VectorXd sq = X.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, X.rows()) +
                       sq.transpose().replicate(X.rows(), 1) -
                       2.0 * (X * X.transpose());
  d2 = d2.cwiseMax(0.0);
  d2.diagonal().setZero();
  return d2;
}

// softmax of -beta * d2 with entry i excluded; beta = 1/(2 sigma^2)
Eigen::VectorXd gaussian_row(int i, const Eigen::VectorXd& d2, double beta) {
  const auto n = d2.size();
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) lo = std::min(lo, d2(j));
  }
  Eigen::VectorXd row(n);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    row(j) = (j == i) ? 0.0 : std::exp(-beta * (d2(j) - lo));
    total += row(j);
  }
  row /= total;
  return row;
}

}  // namespace

GaussianCalibration calibrate_sigmas(const Eigen::MatrixXd& data,
                                     double target_perplexity) {
  const auto n = data.rows();
  if (n < 2) throw validation_error("calibrate_sigmas: need N >= 2");
  if (!(target_perplexity > 1.0) || !(target_perplexity < static_cast<double>(n))) {
    throw validation_error("calibrate_sigmas: perplexity must lie in (1, N)");
  }
  const Eigen::MatrixXd d2 = squared_distances(data);

  GaussianCalibration res;
  res.sigmas.resize(n);
  res.achieved_perplexity.resize(n);
  res.converged.assign(n, false);

  for (Eigen::Index i = 0; i < n; ++i) {
    auto perp_at = [&](double beta) {
      return affinity::row_perplexity(gaussian_row(static_cast<int>(i), d2.row(i), beta));
    };
    // perplexity decreases in beta
    double lo = 1e-12, hi = 1e12;
    if (std::abs(perp_at(lo) - perp_at(hi)) < 1e-9 * perp_at(lo)) {
      res.sigmas(i) = 1.0;  // flat row; any bandwidth gives the same conditionals
      res.achieved_perplexity(i) = perp_at(lo);
      continue;
    }
    double beta = 1.0, achieved = perp_at(beta);
    for (int it = 0; it < 100 && std::abs(achieved - target_perplexity) >
                                     1e-4 * target_perplexity;
         ++it) {
      if (achieved > target_perplexity) {
        lo = beta;
      } else {
        hi = beta;
      }
      beta = 0.5 * (lo + hi);
      achieved = perp_at(beta);
    }
    res.sigmas(i) = std::sqrt(0.5 / beta);
    res.achieved_perplexity(i) = achieved;
    res.converged[i] = std::abs(achieved - target_perplexity) <=
                       1e-4 * target_perplexity;
  }
  return res;
}

Eigen::MatrixXd tsne_joint_p(const Eigen::MatrixXd& data, double perplexity) {
  const auto n = data.rows();
  const auto calib = calibrate_sigmas(data, perplexity);
  const Eigen::MatrixXd d2 = squared_distances(data);
  Eigen::MatrixXd cond(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double beta = 0.5 / (calib.sigmas(i) * calib.sigmas(i));
    cond.row(i) = gaussian_row(static_cast<int>(i), d2.row(i), beta).transpose();
  }
  Eigen::MatrixXd p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  p.diagonal().setZero();
  return p;
}

Eigen::MatrixXd tsne_joint_q(const Eigen::MatrixXd& Y) {
  const auto n = Y.rows();
  if (n < 2) throw validation_error("tsne_joint_q: need N >= 2");
  const Eigen::MatrixXd d2 = squared_distances(Y);
  Eigen::MatrixXd w = (1.0 + d2.array()).inverse().matrix();
  w.diagonal().setZero();
  return w / w.sum();
}

Eigen::MatrixXd tsne_gradient(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                              const Eigen::MatrixXd& Y) {
  const auto n = Y.rows();
  const Eigen::MatrixXd d2 = squared_distances(Y);
  const Eigen::MatrixXd w = (1.0 + d2.array()).inverse().matrix();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, Y.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double coeff = 4.0 * (P(i, j) - Q(i, j)) * w(i, j);
      grad.row(i) += coeff * (Y.row(i) - Y.row(j));
    }
  }
  return grad;
}

TsneRun tsne_run(const Eigen::MatrixXd& data, const TsneConfig& config) {
  const auto n = data.rows();
  if (config.iterations < 0) throw validation_error("tsne_run: iterations must be >= 0");

  const Eigen::MatrixXd P = tsne_joint_p(data, config.perplexity);

  TsneRun result;
  result.config = config;
  auto rng = make_rng(config.seed, RngStream::kEmbedInit);
  std::normal_distribution<double> gauss(0.0, 1e-4);
  result.Y.resize(n, config.target_dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < config.target_dim; ++j) result.Y(i, j) = gauss(rng);
  }

  Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, config.target_dim);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, config.target_dim);
  result.loss_trace.reserve(config.iterations);

  for (int t = 0; t < config.iterations; ++t) {
    const bool exaggerate = t < config.exaggeration_iters;
    const Eigen::MatrixXd Pt = exaggerate ? (config.exaggeration * P).eval() : P;
    const Eigen::MatrixXd Q = tsne_joint_q(result.Y);
    result.loss_trace.push_back(optimizer::kl_cost(P, Q));

    const Eigen::MatrixXd grad = tsne_gradient(Pt, Q, result.Y);
    const double momentum = (t < config.momentum_switch_iter)
                                ? config.momentum_initial
                                : config.momentum_final;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < config.target_dim; ++j) {
        const bool same_sign = (grad(i, j) > 0.0) == (velocity(i, j) > 0.0);
        gains(i, j) = same_sign ? std::max(gains(i, j) * 0.8, 0.01)
                                : gains(i, j) + 0.2;
      }
    }
    velocity = momentum * velocity -
               config.learning_rate * gains.cwiseProduct(grad);
    result.Y += velocity;
    result.Y.rowwise() -= result.Y.colwise().mean();
  }
  return result;
}

}  // namespace spheresne::tsne
