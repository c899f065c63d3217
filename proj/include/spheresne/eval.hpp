#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spheresne::eval {

struct EvalReport {
  // confusion(i, j): proportion of points assigned to cluster i whose true
  // label is j, normalized over the assigned-cluster row
  Eigen::MatrixXd confusion;
  std::vector<double> per_cluster_entropy;  // nats; NaN for empty clusters
  double mean_entropy = 0.0;                // over clusters with >= 1 assignment
  double accuracy = 0.0;
  Eigen::MatrixXd center_images;  // k x dim
  std::vector<int> assignments;
  std::vector<int> empty_clusters;  // assigned-count zero, excluded from the mean
};

// Per-cluster mean of the embedded points; renormalized to the sphere when
// `spherical` (zero mean is degenerate and throws).
Eigen::MatrixXd center_images(const Eigen::MatrixXd& Y,
                              const std::vector<int>& labels, int k,
                              bool spherical);

// Nearest center image: cosine argmax when spherical, Euclidean argmin
// otherwise; ties go to the lowest cluster index.
std::vector<int> classify(const Eigen::MatrixXd& Y,
                          const Eigen::MatrixXd& images, bool spherical);

EvalReport evaluate(const Eigen::MatrixXd& Y, const std::vector<int>& labels,
                    int k, bool spherical);

}  // namespace spheresne::eval
