#include "rsinfer/dgp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rsinfer {

Sample iid_normal(int n, RngStream &rng) {
  std::vector<double> data(n);
  for (int i = 0; i < n; ++i) data[i] = rng.normal();
  return Sample(n, 1, std::move(data));
}

Sample dependency_graph_mix(const Graph &g, const MixingParams &params, RngStream &rng) {
  if (!(params.c >= 0.0 && params.c <= 1.0))
    throw std::invalid_argument("dependency_graph_mix: c must be in [0,1]");
  const int n = g.node_count();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal();
  const double keep = std::sqrt(1.0 - params.c * params.c);
  // adjacency lists are sorted, so visiting i ascending and j > i ascending
  // walks the deduplicated edge list in lexicographic order
  for (int i = 0; i < n; ++i) {
    for (int j : g.neighbors(i)) {
      if (j <= i) continue;
      const double z = rng.normal();
      y[i] = keep * y[i] + params.c * z;
      y[j] = keep * y[j] + params.c * z;
    }
  }
  return Sample(n, 1, std::move(y));
}

NetworkGaussianSampler::NetworkGaussianSampler(const DistanceMatrix &dist,
                                               const NetworkCovParams &params)
    : n_(dist.nodes()) {
  if (!(params.rho > 0.0))
    throw std::invalid_argument("network_gaussian: rho must be positive");
  const int n = n_;
  Eigen::MatrixXd target(n, n);
  for (int i = 0; i < n; ++i) {
    target(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const int d = dist(i, j);
      const double c = (d == DistanceMatrix::kInfinite)
                           ? 0.0
                           : std::exp(-params.rho * static_cast<double>(d));
      target(i, j) = c;
      target(j, i) = c;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(target);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("network_gaussian: eigendecomposition failed");
  Eigen::VectorXd evals = solver.eigenvalues();
  constexpr double kFloor = 1e-10;
  for (int i = 0; i < n; ++i) evals[i] = std::max(evals[i], kFloor);

  Eigen::MatrixXd repaired =
      solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().transpose();
  Eigen::VectorXd scale = repaired.diagonal().cwiseSqrt().cwiseInverse();

  // factor = D^-1/2 V Lambda^1/2 gives exactly the rescaled repaired matrix
  Eigen::MatrixXd factor =
      scale.asDiagonal() * solver.eigenvectors() * evals.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd final_cov = scale.asDiagonal() * repaired * scale.asDiagonal();
  repair_rel_err_ = (final_cov - target).norm() / target.norm();

  factor_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) factor_[static_cast<std::size_t>(i) * n + j] = factor(i, j);
}

Sample NetworkGaussianSampler::draw(RngStream &rng) const {
  std::vector<double> z(n_);
  for (int i = 0; i < n_; ++i) z[i] = rng.normal();
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double *row = factor_.data() + static_cast<std::size_t>(i) * n_;
    double acc = 0.0;
    for (int j = 0; j < n_; ++j) acc += row[j] * z[j];
    y[i] = acc;
  }
  return Sample(n_, 1, std::move(y));
}

Sample network_gaussian(const DistanceMatrix &dist, const NetworkCovParams &params,
                        RngStream &rng) {
  return NetworkGaussianSampler(dist, params).draw(rng);
}

}  // namespace rsinfer
