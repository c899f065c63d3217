#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spheresne::simgen {

struct SimSpec {
  int d = 50;             // ambient dimension
  int k = 4;              // cluster count
  int n_total = 800;      // total points, split as evenly as possible
  double gen_kappa = 15;  // sampling concentration
  double min_separation = 0.5;  // max allowed pairwise center dot product
  std::uint64_t seed = 1;
};

struct Dataset {
  Eigen::MatrixXd points;   // n_total x d, unit rows, grouped by cluster
  std::vector<int> labels;  // in [0, k)
  Eigen::MatrixXd centers;  // k x d, unit rows
  SimSpec spec;
};

// First center uniform on the sphere; the rest flip a random subset of its
// coordinate signs. Candidates too close to an existing center (dot product
// above min_separation) or repeating a flip pattern are redrawn, up to 1000
// times each.
Eigen::MatrixXd generate_centers(const SimSpec& spec);

// Centers plus balanced vMF cluster samples, deterministic given the seed.
Dataset generate_dataset(const SimSpec& spec);

}  // namespace spheresne::simgen
