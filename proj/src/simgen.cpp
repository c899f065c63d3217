#include "spheresne/simgen.hpp"

#include <set>

#include "spheresne/errors.hpp"
#include "spheresne/rng.hpp"
#include "spheresne/vmf.hpp"

namespace spheresne::simgen {

namespace {

void validate(const SimSpec& spec) {
  if (spec.d < 2) throw validation_error("simgen: d must be >= 2");
  if (spec.k < 1) throw validation_error("simgen: need at least one cluster");
  if (spec.n_total < spec.k) {
    throw validation_error("simgen: n_total must be >= cluster count");
  }
  if (!(spec.gen_kappa > 0.0)) throw validation_error("simgen: gen_kappa must be > 0");
}

}  // namespace

Eigen::MatrixXd generate_centers(const SimSpec& spec) {
  validate(spec);
  Eigen::MatrixXd centers(spec.k, spec.d);
  centers.row(0) =
      vmf::sample_uniform_sphere(spec.d, 1, splitmix64(spec.seed ^ 0x6331c5u));

  auto rng = make_rng(spec.seed, RngStream::kCenters);
  std::bernoulli_distribution coin(0.5);

  std::set<std::vector<bool>> patterns;
  patterns.insert(std::vector<bool>(spec.d, false));  // mu_1 itself

  for (int c = 1; c < spec.k; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      std::vector<bool> mask(spec.d);
      for (int j = 0; j < spec.d; ++j) mask[j] = coin(rng);
      if (patterns.count(mask)) continue;

      Eigen::VectorXd candidate = centers.row(0);
      for (int j = 0; j < spec.d; ++j) {
        if (mask[j]) candidate(j) = -candidate(j);
      }
      bool separated = true;
      for (int prev = 0; prev < c; ++prev) {
        if (centers.row(prev).dot(candidate) > spec.min_separation) {
          separated = false;
          break;
        }
      }
      if (!separated) continue;
      centers.row(c) = candidate;
      patterns.insert(mask);
      placed = true;
    }
    if (!placed) {
      throw numeric_error(
          "generate_centers: could not place " + std::to_string(spec.k) +
          " centers with pairwise dot <= " + std::to_string(spec.min_separation) +
          " in dimension " + std::to_string(spec.d) + " after 1000 redraws");
    }
  }
  return centers;
}

Dataset generate_dataset(const SimSpec& spec) {
  validate(spec);
  Dataset ds;
  ds.spec = spec;
  ds.centers = generate_centers(spec);
  ds.points.resize(spec.n_total, spec.d);
  ds.labels.resize(spec.n_total);

  const int base = spec.n_total / spec.k;
  const int extra = spec.n_total % spec.k;  // first `extra` clusters get one more
  int row = 0;
  for (int c = 0; c < spec.k; ++c) {
    const int count = base + (c < extra ? 1 : 0);
    const vmf::VmfParams params(ds.centers.row(c), spec.gen_kappa);
    const std::uint64_t cluster_seed = splitmix64(
        spec.seed ^ splitmix64(static_cast<std::uint64_t>(RngStream::kClusterBase) + c));
    ds.points.middleRows(row, count) = vmf::sample_vmf(params, count, cluster_seed);
    for (int i = 0; i < count; ++i) ds.labels[row + i] = c;
    row += count;
  }
  return ds;
}

}  // namespace spheresne::simgen
