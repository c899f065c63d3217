#include "spheresne/eval.hpp"

#include <cmath>
#include <limits>

#include "spheresne/errors.hpp"

namespace spheresne::eval {

Eigen::MatrixXd center_images(const Eigen::MatrixXd& Y,
                              const std::vector<int>& labels, int k,
                              bool spherical) {
  if (static_cast<Eigen::Index>(labels.size()) != Y.rows()) {
    throw validation_error("center_images: labels do not match embedding rows");
  }
  Eigen::MatrixXd images = Eigen::MatrixXd::Zero(k, Y.cols());
  std::vector<int> counts(k, 0);
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= k) throw validation_error("center_images: label out of range");
    images.row(c) += Y.row(i);
    ++counts[c];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      throw validation_error("center_images: cluster " + std::to_string(c) +
                             " has no points");
    }
    images.row(c) /= counts[c];
    if (spherical) {
      const double nrm = images.row(c).norm();
      if (nrm < 1e-12) {
        throw numeric_error("center_images: cluster " + std::to_string(c) +
                            " has a degenerate (zero) spherical mean");
      }
      images.row(c) /= nrm;
    }
  }
  return images;
}

std::vector<int> classify(const Eigen::MatrixXd& Y,
                          const Eigen::MatrixXd& images, bool spherical) {
  std::vector<int> assigned(Y.rows());
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < images.rows(); ++c) {
      const double score = spherical
                               ? Y.row(i).dot(images.row(c))
                               : -(Y.row(i) - images.row(c)).squaredNorm();
      if (score > best_score) {  // strict: ties keep the lowest index
        best_score = score;
        best = static_cast<int>(c);
      }
    }
    assigned[i] = best;
  }
  return assigned;
}

EvalReport evaluate(const Eigen::MatrixXd& Y, const std::vector<int>& labels,
                    int k, bool spherical) {
  EvalReport report;
  report.center_images = center_images(Y, labels, k, spherical);
  report.assignments = classify(Y, report.center_images, spherical);

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  int correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    counts(report.assignments[i], labels[i]) += 1.0;
    if (report.assignments[i] == labels[i]) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());

  report.confusion = Eigen::MatrixXd::Zero(k, k);
  report.per_cluster_entropy.assign(k, std::numeric_limits<double>::quiet_NaN());
  double entropy_sum = 0.0;
  int populated = 0;
  for (int i = 0; i < k; ++i) {
    const double row_total = counts.row(i).sum();
    if (row_total == 0.0) {
      report.empty_clusters.push_back(i);
      continue;
    }
    double h = 0.0;
    for (int j = 0; j < k; ++j) {
      const double c = counts(i, j) / row_total;
      report.confusion(i, j) = c;
      if (c > 0.0) h -= c * std::log(c);
    }
    report.per_cluster_entropy[i] = h;
    entropy_sum += h;
    ++populated;
  }
  report.mean_entropy = populated > 0 ? entropy_sum / populated : 0.0;
  return report;
}

}  // namespace spheresne::eval
