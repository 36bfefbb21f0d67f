#pragma once

// Small dense symmetric matrices and the Cholesky-based SPD inverse used for
// the m x m covariance of the test statistics. Only the lower triangle is
// stored, so symmetry is exact by construction.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rsinfer {

class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string &what) : std::runtime_error(what) {}
};

class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim) : dim_(dim), data_(tri_size(dim), 0.0) {
    if (dim < 1) throw std::invalid_argument("SymmetricMatrix: dim must be positive");
  }

  static SymmetricMatrix identity(int dim) {
    SymmetricMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
  }

  int dim() const { return dim_; }

  double operator()(int i, int j) const {
    return (i >= j) ? data_[index(i, j)] : data_[index(j, i)];
  }

  void set(int i, int j, double value) {
    data_[(i >= j) ? index(i, j) : index(j, i)] = value;
  }

  void add(int i, int j, double value) {
    data_[(i >= j) ? index(i, j) : index(j, i)] += value;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  // y = M x
  void multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dim_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
  }

  double quadratic_form(std::span<const double> x) const {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i) {
      acc += (*this)(i, i) * x[i] * x[i];
      for (int j = 0; j < i; ++j) acc += 2.0 * (*this)(i, j) * x[i] * x[j];
    }
    return acc;
  }

 private:
  static std::size_t tri_size(int dim) {
    return static_cast<std::size_t>(dim) * (dim + 1) / 2;
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int dim_;
  std::vector<double> data_;
};

// Inverse of a symmetric positive definite matrix via Cholesky. Throws
// NotPositiveDefinite when a pivot falls below rel_tol * trace/dim, which is
// how a degenerate sample covariance (constant column) surfaces.
SymmetricMatrix invert_spd(const SymmetricMatrix &m, double rel_tol = 1e-10);

}  // namespace rsinfer
