#include "spheresne/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spheresne/errors.hpp"

namespace spheresne::io {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_points(const std::string& path, const Eigen::MatrixXd& points,
                  const std::vector<int>* labels) {
  if (labels && static_cast<Eigen::Index>(labels->size()) != points.rows()) {
    throw validation_error("write_points: label count does not match rows");
  }
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);

  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    out << (j ? ",x" : "x") << j;
  }
  if (labels) out << ",label";
  out << "\n";

  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (j) out << ',';
      out << format_value(points(i, j));
    }
    if (labels) out << ',' << (*labels)[i];
    out << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

Table read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open for reading: " + path);

  std::string line;
  if (!std::getline(in, line)) throw validation_error("empty file: " + path);

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  bool has_label = !header.empty() && header.back() == "label";
  const size_t dim = header.size() - (has_label ? 1 : 0);
  if (dim == 0) throw validation_error("no coordinate columns in: " + path);
  for (size_t j = 0; j < dim; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw validation_error("unexpected header column '" + header[j] +
                             "' in: " + path);
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col < dim) {
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{}) {
          throw validation_error("bad numeric value '" + cell + "' in: " + path);
        }
        values.push_back(v);
      } else if (has_label && col == dim) {
        labels.push_back(std::stoi(cell));
      } else {
        throw validation_error("too many columns on row " +
                               std::to_string(rows + 1) + " of: " + path);
      }
      ++col;
    }
    if (col != header.size()) {
      throw validation_error("short row " + std::to_string(rows + 1) +
                             " in: " + path);
    }
    ++rows;
  }
  if (rows == 0) throw validation_error("no data rows in: " + path);

  Table t;
  t.values.resize(rows, dim);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < dim; ++j) t.values(i, j) = values[i * dim + j];
  }
  if (has_label) t.labels = std::move(labels);
  return t;
}

void write_loss_trace(const std::string& path, const std::vector<double>& trace) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "iteration,kl\n";
  for (size_t t = 0; t < trace.size(); ++t) {
    out << t << ',' << format_value(trace[t]) << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace spheresne::io
