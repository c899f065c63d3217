#include "spheresne/svg.hpp"

#include <array>
#include <cstdio>
#include <sstream>

#include "spheresne/errors.hpp"

namespace spheresne::svg {

namespace {

constexpr std::array<const char*, 16> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd"};

constexpr double kPanel = 360.0;   // panel side in px
constexpr double kMargin = 24.0;
constexpr double kRadius = 2.5;    // marker radius

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void emit_circle(std::ostringstream& out, double cx, double cy, int label) {
  out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
      << fmt(kRadius) << "\" fill=\"" << kPalette[label % kPalette.size()]
      << "\" fill-opacity=\"0.8\"/>\n";
}

}  // namespace

std::string scatter(const Eigen::MatrixXd& points,
                    const std::vector<int>& labels) {
  if (points.rows() == 0) throw validation_error("scatter: empty input");
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw validation_error("scatter: label count does not match points");
  }
  const auto dim = points.cols();
  if (dim != 2 && dim != 3) {
    throw validation_error("scatter: expected 2 or 3 columns");
  }

  std::ostringstream out;
  if (dim == 2) {
    const double xmin = points.col(0).minCoeff(), xmax = points.col(0).maxCoeff();
    const double ymin = points.col(1).minCoeff(), ymax = points.col(1).maxCoeff();
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = kPanel / span;
    const double w = kPanel + 2 * kMargin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(w) << "\" viewBox=\"0 0 " << fmt(w) << ' '
        << fmt(w) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const double cx = kMargin + (points(i, 0) - xmin) * scale;
      const double cy = kMargin + (ymax - points(i, 1)) * scale;  // y up
      emit_circle(out, cx, cy, labels[i]);
    }
  } else {
    // two orthographic hemisphere projections onto the xy plane
    const double w = 2 * kPanel + 3 * kMargin;
    const double h = kPanel + 2 * kMargin;
    const double r = kPanel / 2.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << ' '
        << fmt(h) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int panel = 0; panel < 2; ++panel) {
      const double ox = kMargin + panel * (kPanel + kMargin) + r;
      const double oy = kMargin + r;
      out << "<circle cx=\"" << fmt(ox) << "\" cy=\"" << fmt(oy) << "\" r=\""
          << fmt(r) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
      for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const bool upper = points(i, 2) >= 0.0;
        if ((panel == 0) != upper) continue;
        emit_circle(out, ox + points(i, 0) * r, oy - points(i, 1) * r, labels[i]);
      }
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace spheresne::svg
