#pragma once

// Plain-loop serial reference implementations of the statistics, kept for
// validating the optimized kernels and for the serial-vs-parallel benchmark.
// Everything here follows the defining double sums directly, with no
// algebraic shortcuts and no threading.

#include <span>
#include <vector>

#include "rsinfer/matrix.hpp"
#include "rsinfer/mean_test.hpp"
#include "rsinfer/prefix.hpp"
#include "rsinfer/sample.hpp"

namespace rsinfer::reference {

// Direct O(b^2 m^2) evaluation of the cross-pair quadratic form.
double u_statistic_direct(const Sample &x, std::span<const double> mu,
                          const SymmetricMatrix &sigma_inv, const PermutationPrefix &prefix);

double s_statistic_direct(const Sample &x, std::span<const double> mu,
                          const PermutationBundle &bundle);

double t_statistic_direct(const Sample &x, std::span<const double> mu,
                          const PermutationBundle &bundle);

// Serial rebuild of the permutation critical value from the same streams the
// production engine uses.
double permutation_critical_value_direct(const Sample &x, const InferenceConfig &cfg,
                                         const StreamScope &scope, double alpha);

// Serial rebuild of q(mu; level).
double confidence_function_direct(const Sample &x, std::span<const double> mu,
                                  const InferenceConfig &cfg, const StreamScope &scope,
                                  double level);

}  // namespace rsinfer::reference
