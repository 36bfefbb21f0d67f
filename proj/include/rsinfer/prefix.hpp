#pragma once

// Uniform sampling of the first b entries of a random permutation of [n].
// Only the prefix is ever generated (partial Fisher-Yates over an index
// pool): the statistics read nothing past position b, and a truncated full
// shuffle has the same distribution at O(b) cost per draw.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rsinfer/philox.hpp"

namespace rsinfer {

// b distinct indices in [0, n), jointly uniform over ordered b-tuples.
using PermutationPrefix = std::vector<int>;

// Reusable sampler; the pool is restored to the identity after every draw so
// a prefix depends only on the consumed random words, never on prior draws.
class PrefixSampler {
 public:
  explicit PrefixSampler(int n) : n_(n), pool_(n) {
    if (n < 2) throw std::invalid_argument("PrefixSampler: need n >= 2");
    std::iota(pool_.begin(), pool_.end(), 0);
  }

  int n() const { return n_; }

  void draw(int b, RngStream &rng, PermutationPrefix &out) {
    if (b < 2) throw std::invalid_argument("draw_prefix: b must be >= 2");
    if (b > n_) throw std::invalid_argument("draw_prefix: b exceeds n");
    out.resize(b);
    swaps_.resize(b);
    for (int i = 0; i < b; ++i) {
      const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_ - i)));
      swaps_[i] = j;
      std::swap(pool_[i], pool_[j]);
      out[i] = pool_[i];
    }
    for (int i = b - 1; i >= 0; --i) std::swap(pool_[i], pool_[swaps_[i]]);
  }

 private:
  int n_;
  std::vector<int> pool_;
  std::vector<int> swaps_;
};

inline PermutationPrefix draw_prefix(RngStream &rng, int n, int b) {
  PrefixSampler sampler(n);
  PermutationPrefix out;
  sampler.draw(b, rng, out);
  return out;
}

// R independent prefixes drawn back to back from one stream.
using PermutationBundle = std::vector<PermutationPrefix>;

inline PermutationBundle draw_bundle(RngStream &rng, int n, int b, int R) {
  if (R < 0) throw std::invalid_argument("draw_bundle: R must be nonnegative");
  PermutationBundle bundle(R);
  if (R == 0) return bundle;
  PrefixSampler sampler(n);
  for (int r = 0; r < R; ++r) sampler.draw(b, rng, bundle[r]);
  return bundle;
}

}  // namespace rsinfer
