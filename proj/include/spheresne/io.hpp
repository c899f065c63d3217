#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace spheresne::io {

struct Table {
  Eigen::MatrixXd values;            // numeric columns x0..x{d-1}
  std::optional<std::vector<int>> labels;
};

// CSV with a mandatory header `x0,...,x{d-1}[,label]`; values printed with
// 17 significant digits so a round trip is lossless.
void write_points(const std::string& path, const Eigen::MatrixXd& points,
                  const std::vector<int>* labels = nullptr);

Table read_points(const std::string& path);

void write_loss_trace(const std::string& path, const std::vector<double>& trace);

std::string format_value(double v);  // %.17g

}  // namespace spheresne::io
