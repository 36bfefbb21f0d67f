#pragma once

// Counter-based PRNG (Philox4x32-10) and the stream layout used across the
// project. Every random quantity is drawn from a stream identified by
// (master_seed, stream_id); identical ids give identical sequences on every
// platform, and distinct ids give statistically independent streams. This is
// what makes the Monte Carlo runs reproducible for any worker-thread count.
//
// Stream id layout (64 bits):
//   bits  0..19  purpose code (see stream_purpose below)
//   bits 20..41  inner replication index (permutation-bundle index l or s)
//   bits 42..63  outer replication index (Monte Carlo repetition)
//
// Known-answer vectors for the generator are in tests/test_rng.cpp.

#include <cmath>
#include <cstdint>

namespace rsinfer {

namespace stream_purpose {
constexpr std::uint64_t kSample = 0;      // data-generating process draws
constexpr std::uint64_t kGraph = 1;       // random graph generation
constexpr std::uint64_t kCritical = 2;    // bundles for critical values (inner = l)
constexpr std::uint64_t kConfidence = 3;  // bundles for the confidence function (inner = s)
constexpr std::uint64_t kTestBundle = 4;  // the bundle behind a single reported test statistic
constexpr std::uint64_t kLambdaMc = 5;    // Monte Carlo tuple draws in the lambda oracle
constexpr std::uint64_t kScratch = 6;     // ad-hoc draws in tests/tools
}  // namespace stream_purpose

constexpr std::uint64_t make_stream_id(std::uint64_t outer_rep, std::uint64_t inner_rep,
                                       std::uint64_t purpose) {
  return (outer_rep << 42) | ((inner_rep & 0x3FFFFFu) << 20) | (purpose & 0xFFFFFu);
}

struct Philox4x32Block {
  std::uint32_t v[4];
};

// One keyed block of Philox4x32 with 10 rounds.
inline Philox4x32Block philox4x32_10(Philox4x32Block ctr, std::uint32_t key0,
                                     std::uint32_t key1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr.v[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr.v[2];
    const Philox4x32Block next = {{static_cast<std::uint32_t>(p1 >> 32) ^ ctr.v[1] ^ key0,
                                   static_cast<std::uint32_t>(p1),
                                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr.v[3] ^ key1,
                                   static_cast<std::uint32_t>(p0)}};
    ctr = next;
    key0 += kWeyl0;
    key1 += kWeyl1;
  }
  return ctr;
}

// A single-owner random stream. The 128-bit counter is split as
// (block counter lo, block counter hi, stream id lo, stream id hi), so streams
// never overlap and each stream addresses 2^64 blocks of four 32-bit words.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key0_(static_cast<std::uint32_t>(master_seed)),
        key1_(static_cast<std::uint32_t>(master_seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(stream_id)),
        stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  std::uint32_t next_u32() {
    if (buffered_ == 0) refill();
    return buffer_.v[4 - buffered_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform double on (0, 1]; never returns 0 so it is log-safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Unbiased uniform integer on [0, bound). Lemire's multiply-shift with
  // rejection on the low word.
  std::uint64_t uniform_below(std::uint64_t bound) {
    std::uint64_t x = next_u64();
    unsigned __int128 mul = static_cast<unsigned __int128>(x) * bound;
    std::uint64_t low = static_cast<std::uint64_t>(mul);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next_u64();
        mul = static_cast<unsigned __int128>(x) * bound;
        low = static_cast<std::uint64_t>(mul);
      }
    }
    return static_cast<std::uint64_t>(mul >> 64);
  }

  // Standard normal via Box-Muller; generates pairs, second value is cached.
  double normal();

 private:
  void refill() {
    const Philox4x32Block ctr = {{static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32), stream_lo_,
                                  stream_hi_}};
    buffer_ = philox4x32_10(ctr, key0_, key1_);
    ++block_;
    buffered_ = 4;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_ = 0;
  Philox4x32Block buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

inline double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.283185307179586476925286766559 * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

}  // namespace rsinfer
