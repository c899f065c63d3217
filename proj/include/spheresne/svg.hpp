#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace spheresne::svg {

// Deterministic scatter plot. 2-column input gives a single panel; 3-column
// unit-norm input gives two orthographic hemisphere panels (z >= 0, z < 0).
// One fill color per label from a fixed 16-entry palette, cycling beyond.
std::string scatter(const Eigen::MatrixXd& points,
                    const std::vector<int>& labels);

}  // namespace spheresne::svg
