#pragma once

#include <array>
#include <cstdint>

#include "spsd/linalg.hpp"

namespace spsd {

/// Counter-based random stream built on the Philox4x32-10 bijection.
///
/// A stream is identified by (seed, stream_id); draw number i of a stream is
/// the Philox output for counter (i, stream_id) under key seed, so draws are
/// reproducible across platforms and independent of call interleaving in
/// other streams. `substream(tag)` derives a child stream id by hashing the
/// parent id with the tag, which is how callers split a master seed into
/// per-trial and per-component streams.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  RandomStream substream(std::uint64_t tag) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal deviate (Box-Muller, both outputs used).
  double normal();
  /// Uniform integer in [0, bound), unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// +1 or -1 with equal probability.
  double rademacher();

  /// rows x cols matrix of i.i.d. N(0,1), filled column-major.
  Matrix gaussian_matrix(Index rows, Index cols);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a hash, stable across platforms.
std::uint64_t stable_hash(const void* data, std::size_t size);

}  // namespace spsd
