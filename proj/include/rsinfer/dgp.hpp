#pragma once

// Data-generating processes for the simulation study: i.i.d. normals, the
// edge-sequential mixing construction on a dependency graph, and network
// Gaussians with correlation exp(-rho * distance).

#include <vector>

#include "rsinfer/graph.hpp"
#include "rsinfer/philox.hpp"
#include "rsinfer/sample.hpp"

namespace rsinfer {

// n x 1 sample of i.i.d. standard normals.
Sample iid_normal(int n, RngStream &rng);

struct MixingParams {
  double c = 0.0;  // blending weight in [0, 1]
};

// Starts from i.i.d. N(0,1), then walks the edge list once (each undirected
// edge exactly once, sorted ascending by first then second endpoint): at each
// edge a fresh shared normal Z is blended into both endpoints as
// sqrt(1-c^2)*current + c*Z, and the updated values feed later steps. Every
// step is a variance-preserving rotation, so all marginals stay exactly N(0,1).
Sample dependency_graph_mix(const Graph &g, const MixingParams &params, RngStream &rng);

struct NetworkCovParams {
  double rho = 1.0;  // correlation decay rate, > 0
};

// Jointly normal vector with target correlation exp(-rho * D_ij) for finite
// distances and 0 for unreachable pairs. The target matrix on a graph metric
// need not be positive semidefinite; it is repaired by clipping eigenvalues
// below 1e-10 and rescaling back to a unit diagonal. The factor is built once
// so repeated draws cost one matrix-vector product.
class NetworkGaussianSampler {
 public:
  NetworkGaussianSampler(const DistanceMatrix &dist, const NetworkCovParams &params);

  int nodes() const { return n_; }
  Sample draw(RngStream &rng) const;

  // ||C_repaired - C_target||_F / ||C_target||_F
  double repair_relative_error() const { return repair_rel_err_; }

 private:
  int n_;
  std::vector<double> factor_;  // row-major n x n, sample = factor * z
  double repair_rel_err_ = 0.0;
};

Sample network_gaussian(const DistanceMatrix &dist, const NetworkCovParams &params,
                        RngStream &rng);

}  // namespace rsinfer
