#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spheresne::optimizer {

struct VmfSneConfig {
  int target_dim = 3;
  double perplexity = 40.0;
  double embed_kappa = 2.0;
  int iterations = 1000;
  double learning_rate = 0.5;
  std::uint64_t seed = 1;
  // optional stop on |dKL| < 1e-9 holding for 50 consecutive iterations
  bool early_stop = false;
};

struct EmbeddingRun {
  VmfSneConfig config;
  Eigen::MatrixXd Y;               // N x target_dim, rows unit norm
  std::vector<double> loss_trace;  // KL per executed iteration, before the step
  double max_norm_error = 0.0;     // max | ||y_i|| - 1 | seen over all iterations
};

// KL(P||Q) = sum_{i != j} p ln(p/q); 0 ln(0/q) = 0, p > 0 with q = 0 gives +inf.
double kl_cost(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q);

// Ascent direction of L~ = kappa sum p_ij y_i'y_j - ln Z at each row:
// dL~/dy_k = 2 kappa sum_i (p_ik - q_ik) y_i.
Eigen::MatrixXd gradient(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                         const Eigen::MatrixXd& Y, double kappa);

// y_i <- normalize(y_i + eta * grad_i); a vanishing update is nudged by a
// seeded 1e-8 perturbation before normalizing.
Eigen::MatrixXd step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& grad,
                     double eta, std::uint64_t seed = 0);

// Full vMF-SNE loop: calibrate per-point kappas, build P, random spherical
// init, then `iterations` rounds of {Q, gradient, step}.
EmbeddingRun run(const Eigen::MatrixXd& data, const VmfSneConfig& config);

}  // namespace spheresne::optimizer
