#pragma once

// Data model and tuning parameters shared by every inference routine.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsinfer {

// Immutable n x m data matrix, one row per cross-sectional unit. All entries
// must be finite. The inference routines need n >= 2; a single-row sample is
// allowed only as a container (e.g. a one-node simulated draw).
class Sample {
 public:
  Sample(int n, int m, std::vector<double> row_major)
      : n_(n), m_(m), data_(std::move(row_major)) {
    if (n < 1) throw std::invalid_argument("Sample: need at least 1 row");
    if (m < 1) throw std::invalid_argument("Sample: need at least 1 column");
    if (data_.size() != static_cast<std::size_t>(n) * m)
      throw std::invalid_argument("Sample: size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!std::isfinite(data_[i]))
        throw std::invalid_argument("Sample: non-finite entry at flat index " +
                                    std::to_string(i));
    }
  }

  int rows() const { return n_; }
  int cols() const { return m_; }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * m_, static_cast<std::size_t>(m_)};
  }

  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * m_ + j];
  }

 private:
  int n_, m_;
  std::vector<double> data_;
};

enum class CriticalValueMethod { AsymptoticNormal, Permutation };

// All tuning parameters of the inference procedures.
//   R      number of random permutations per statistic
//   b_n    subsample size (>= 2)
//   L      permutation draws behind a critical value
//   S      draws behind the confidence function
//   alpha  nominal level, beta the conservativeness margin (beta < alpha)
struct InferenceConfig {
  int R = 0;  // 0 means "default to n" when bound to a sample
  int b_n = 0;  // 0 means "default to max(2, floor(n^(1/3)))"
  int L = 1000;
  int S = 1000;
  double alpha = 0.05;
  double beta = 0.005;
  std::uint64_t seed = 1;
  CriticalValueMethod critical_value = CriticalValueMethod::Permutation;

  void validate(int n) const {
    if (R < 1) throw std::invalid_argument("InferenceConfig: R must be positive");
    if (b_n < 2) throw std::invalid_argument("InferenceConfig: b_n must be >= 2");
    if (b_n > n) throw std::invalid_argument("InferenceConfig: b_n must not exceed n");
    if (L < 1 || S < 1) throw std::invalid_argument("InferenceConfig: L and S must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("InferenceConfig: alpha must be in (0,1)");
    if (!(beta >= 0.0 && beta < alpha))
      throw std::invalid_argument("InferenceConfig: beta must be in [0, alpha)");
  }

  // Fill R and b_n defaults for a sample of size n: R = n, b_n = max(2, floor(n^(1/3))).
  InferenceConfig bound_to(int n) const {
    InferenceConfig out = *this;
    if (out.R == 0) out.R = n;
    if (out.b_n == 0) out.b_n = default_subsample_size(n);
    out.validate(n);
    return out;
  }

  static int default_subsample_size(int n) {
    int b = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))));
    // guard against floating cube roots landing just below an integer
    while ((b + 1) * (b + 1) * (b + 1) <= n) ++b;
    while (b * b * b > n) --b;
    return b < 2 ? 2 : b;
  }
};

}  // namespace rsinfer
