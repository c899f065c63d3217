#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spheresne::tsne {

struct TsneConfig {
  int target_dim = 2;
  double perplexity = 40.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch_iter = 250;
  double exaggeration = 4.0;
  int exaggeration_iters = 50;
  std::uint64_t seed = 1;
};

struct TsneRun {
  TsneConfig config;
  Eigen::MatrixXd Y;               // N x target_dim, unconstrained
  std::vector<double> loss_trace;  // KL against the unexaggerated P
};

// Per-point Gaussian bandwidths sigma_i calibrated to the target perplexity.
struct GaussianCalibration {
  Eigen::VectorXd sigmas;
  Eigen::VectorXd achieved_perplexity;
  std::vector<bool> converged;
};

GaussianCalibration calibrate_sigmas(const Eigen::MatrixXd& data,
                                     double target_perplexity);

// Gaussian conditionals symmetrized as (p_{i|j} + p_{j|i}) / (2N).
Eigen::MatrixXd tsne_joint_p(const Eigen::MatrixXd& data, double perplexity);

// Student-t kernel with one degree of freedom over ordered pairs.
Eigen::MatrixXd tsne_joint_q(const Eigen::MatrixXd& Y);

// Standard symmetric t-SNE: momentum schedule, early exaggeration, gains,
// Gaussian(0, 1e-4) init; deterministic given the seed.
TsneRun tsne_run(const Eigen::MatrixXd& data, const TsneConfig& config);

// KL descent direction building block, exposed for testing:
// grad_i = 4 sum_j (p_ij - q_ij) w_ij (y_i - y_j), w_ij = (1+||y_i-y_j||^2)^-1.
Eigen::MatrixXd tsne_gradient(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                              const Eigen::MatrixXd& Y);

}  // namespace spheresne::tsne
