#pragma once

// Exact local-dependence coefficient for Gaussian designs with known
// covariance, restricted to the class of unit-norm linear functionals. For
// that class the dependence strength between two disjoint index sets is the
// spectral norm of the cross-covariance block, which makes the coefficient
// exactly computable: lambda(k) is the average, over random size-k index
// prefixes, of the minimal bipartition strength of the drawn set.

#include <cstdint>
#include <span>
#include <vector>

#include "rsinfer/matrix.hpp"
#include "rsinfer/philox.hpp"

namespace rsinfer {

enum class LambdaMethod { ExactEnumeration, MonteCarloPermutations };

struct LambdaReport {
  int n = 0;
  int k = 0;
  double lambda_value = 0.0;
  // rate bound n^(floor(k/2)-k) * d^(floor((k+1)/2)) with unit constant,
  // where d is the maximum count of nonzero off-diagonal covariances per row
  double bound = 0.0;
  LambdaMethod method = LambdaMethod::ExactEnumeration;
  double mc_se = 0.0;  // zero in exact mode
};

// Largest singular value of the cross block cov[a1, a2]; the sets must be
// disjoint and non-empty.
double pair_dependence(const SymmetricMatrix &cov, std::span<const int> a1,
                       std::span<const int> a2);

// Variance for singletons, otherwise the minimum of pair_dependence over all
// bipartitions of the set. Guarded at |a| <= 12.
double set_dependence(const SymmetricMatrix &cov, std::span<const int> a);

// Exact mode enumerates all size-k subsets (requires n <= 10); the subset
// average equals the average over ordered k-prefixes of random permutations
// because set_dependence ignores order. Monte Carlo mode averages over random
// prefixes and reports a standard error.
LambdaReport lambda_k(const SymmetricMatrix &cov, int k, LambdaMethod method,
                      std::uint64_t seed = 0, long num_draws = 100000);

// Max count of nonzero off-diagonal entries in any row (the degree of the
// dependence structure implied by the covariance).
int implied_max_degree(const SymmetricMatrix &cov);

}  // namespace rsinfer
