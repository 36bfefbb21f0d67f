#include "rsinfer/matrix.hpp"

#include <cmath>

namespace rsinfer {

SymmetricMatrix invert_spd(const SymmetricMatrix &m, double rel_tol) {
  const int n = m.dim();
  const double pivot_floor = rel_tol * (m.trace() / n);

  // Lower Cholesky factor, dense scratch.
  std::vector<double> chol(static_cast<std::size_t>(n) * n, 0.0);
  auto L = [&](int i, int j) -> double & { return chol[static_cast<std::size_t>(i) * n + j]; };
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 0.0) || d < pivot_floor) {
      throw NotPositiveDefinite("invert_spd: pivot " + std::to_string(d) + " at column " +
                                std::to_string(j) + " below floor " +
                                std::to_string(pivot_floor));
    }
    const double root = std::sqrt(d);
    L(j, j) = root;
    for (int i = j + 1; i < n; ++i) {
      double acc = m(i, j);
      for (int k = 0; k < j; ++k) acc -= L(i, k) * L(j, k);
      L(i, j) = acc / root;
    }
  }

  // Invert column by column: solve L L^T x = e_j.
  SymmetricMatrix inv(n);
  std::vector<double> work(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) work[i] = (i == j) ? 1.0 : 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = work[i];
      for (int k = 0; k < i; ++k) acc -= L(i, k) * work[k];
      work[i] = acc / L(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double acc = work[i];
      for (int k = i + 1; k < n; ++k) acc -= L(k, i) * work[k];
      work[i] = acc / L(i, i);
    }
    for (int i = j; i < n; ++i) inv.set(i, j, work[i]);
  }
  return inv;
}

}  // namespace rsinfer
