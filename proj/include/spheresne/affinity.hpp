#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spheresne::affinity {

// Per-point concentrations calibrated so each conditional row hits the
// target perplexity. converged[i] is false when the bracket was exhausted
// or the row is flat (all similarities equal), in which case kappas[i] is
// best effort.
struct CalibrationResult {
  Eigen::VectorXd kappas;
  Eigen::VectorXd achieved_perplexity;
  std::vector<int> iterations;
  std::vector<bool> converged;
};

// p_{j|i} over unit-norm rows of data: softmax of kappa_i * x_i'x_j with
// j = i excluded. The vMF normalizer C_d cancels and is never evaluated.
Eigen::VectorXd conditional_row(int i, const Eigen::MatrixXd& data,
                                double kappa_i);

// Same softmax on a precomputed similarity row (entry i ignored).
Eigen::VectorXd conditional_row_from_sims(int i, const Eigen::VectorXd& sims,
                                          double kappa_i);

// 2^H with H the base-2 Shannon entropy of the row; zero entries contribute 0.
double row_perplexity(const Eigen::VectorXd& row);

// Bisection for each kappa_i on [1e-4, 1e6] (bracket expanded when the
// target lies outside); perplexity is monotone decreasing in kappa.
CalibrationResult calibrate_kappas(const Eigen::MatrixXd& data,
                                   double target_perplexity);

// Symmetrized joint (p_{i|j} + p_{j|i}) / (2N): symmetric, zero diagonal,
// sums to 1 over all ordered pairs.
Eigen::MatrixXd joint_p(const Eigen::MatrixXd& data,
                        const CalibrationResult& calib);

// q_{ij} = exp(kappa y_i'y_j) normalized over all ordered pairs m != n,
// stabilized by the global off-diagonal max.
Eigen::MatrixXd joint_q(const Eigen::MatrixXd& Y, double kappa);

}  // namespace spheresne::affinity
