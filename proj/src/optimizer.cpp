#include "spheresne/optimizer.hpp"

#include <cmath>
#include <limits>

#include "spheresne/affinity.hpp"
#include "spheresne/errors.hpp"
#include "spheresne/rng.hpp"
#include "spheresne/vmf.hpp"

namespace spheresne::optimizer {

double kl_cost(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
  if (P.rows() != Q.rows() || P.cols() != Q.cols()) {
    throw validation_error("kl_cost: dimension mismatch");
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      if (i == j) continue;
      const double p = P(i, j);
      if (p <= 0.0) continue;
      const double q = Q(i, j);
      if (q <= 0.0) return std::numeric_limits<double>::infinity();
      kl += p * std::log(p / q);
    }
  }
  return kl;
}

Eigen::MatrixXd gradient(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                         const Eigen::MatrixXd& Y, double kappa) {
  if (P.rows() != Y.rows() || Q.rows() != Y.rows()) {
    throw validation_error("gradient: dimension mismatch");
  }
  // row k of (P - Q) Y is sum_i (p_ik - q_ik) y_i by symmetry of P and Q
  return 2.0 * kappa * ((P - Q) * Y);
}

Eigen::MatrixXd step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& grad,
                     double eta, std::uint64_t seed) {
  if (Y.rows() != grad.rows() || Y.cols() != grad.cols()) {
    throw validation_error("step: shape mismatch");
  }
  Eigen::MatrixXd out = Y + eta * grad;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    if (eta == 0.0 || grad.row(i).isZero(0.0)) {
      out.row(i) = Y.row(i);  // keep the row bit-identical for a null update
      continue;
    }
    double nrm = out.row(i).norm();
    if (nrm < 1e-12) {
      auto rng = make_rng(seed, RngStream::kStepPerturb, static_cast<std::uint64_t>(i));
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        out(i, j) += 1e-8 * gauss(rng);
      }
      nrm = out.row(i).norm();
    }
    out.row(i) /= nrm;
  }
  return out;
}

EmbeddingRun run(const Eigen::MatrixXd& data, const VmfSneConfig& config) {
  if (config.target_dim < 2) throw validation_error("run: target_dim must be >= 2");
  if (!(config.embed_kappa > 0.0)) throw validation_error("run: embed_kappa must be > 0");
  if (!(config.learning_rate > 0.0)) throw validation_error("run: learning_rate must be > 0");
  if (config.iterations < 0) throw validation_error("run: iterations must be >= 0");

  const auto calib = affinity::calibrate_kappas(data, config.perplexity);
  const Eigen::MatrixXd P = affinity::joint_p(data, calib);

  EmbeddingRun result;
  result.config = config;
  result.Y = vmf::sample_uniform_sphere(config.target_dim,
                                        static_cast<int>(data.rows()),
                                        splitmix64(config.seed ^ static_cast<std::uint64_t>(
                                                                     RngStream::kEmbedInit)));
  result.loss_trace.reserve(config.iterations);

  int quiet_iters = 0;
  double prev_kl = std::numeric_limits<double>::quiet_NaN();
  for (int t = 0; t < config.iterations; ++t) {
    const Eigen::MatrixXd Q = affinity::joint_q(result.Y, config.embed_kappa);
    const double kl = kl_cost(P, Q);
    result.loss_trace.push_back(kl);

    const Eigen::MatrixXd grad = gradient(P, Q, result.Y, config.embed_kappa);
    result.Y = step(result.Y, grad, config.learning_rate,
                    config.seed + static_cast<std::uint64_t>(t));

    for (Eigen::Index i = 0; i < result.Y.rows(); ++i) {
      result.max_norm_error =
          std::max(result.max_norm_error, std::abs(result.Y.row(i).norm() - 1.0));
    }
    if (config.early_stop) {
      if (t > 0 && std::abs(kl - prev_kl) < 1e-9) {
        if (++quiet_iters >= 50) break;
      } else {
        quiet_iters = 0;
      }
      prev_kl = kl;
    }
  }
  return result;
}

}  // namespace spheresne::optimizer
