#pragma once

#include <array>
#include <cstdint>

#include "weaver/rational.hpp"

namespace weaver {

/// xoshiro256** seeded through SplitMix64 from (root seed, stream id). Each
/// Monte Carlo replication owns the stream numbered by its index, so results
/// do not depend on scheduling. Output is identical on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Standard normal (Box-Muller, second variate cached).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Exact Bernoulli(p) sampler for rational p. A 128-bit uniform is compared
/// with the first 128 bits of p's binary expansion; on a tie further digits of
/// p are generated exactly, so the draw has probability p with no rounding.
class BernoulliSampler {
 public:
  explicit BernoulliSampler(const Rational& p);

  bool operator()(RandomStream& rng) const;

  const Rational& p() const { return p_; }

 private:
  Rational p_;
  std::uint64_t hi_ = 0;
  std::uint64_t lo_ = 0;
  BigInt remainder_;  // (num * 2^128) mod den
};

}  // namespace weaver
