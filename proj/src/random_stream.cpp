#include "weaver/random_stream.hpp"

#include <cmath>
#include <numbers>

#include "weaver/errors.hpp"

namespace weaver {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  // Mix the stream id into the seed before expanding it, so neighbouring
  // (seed, stream) pairs start far apart.
  std::uint64_t x = seed;
  std::uint64_t mixed = splitmix64(x) ^ stream;
  std::uint64_t s = splitmix64(mixed);
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 == 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

BernoulliSampler::BernoulliSampler(const Rational& p) : p_(p) {
  if (p_ < 0 || p_ > 1) throw RangeError("Bernoulli probability outside [0, 1]");
  if (p_ == 1) {
    hi_ = lo_ = ~std::uint64_t{0};
    remainder_ = 1;  // marks "p = 1"; see operator()
    return;
  }
  BigInt scaled = p_.get_num() * pow2(128);
  BigInt prefix;
  mpz_fdiv_qr(prefix.get_mpz_t(), remainder_.get_mpz_t(), scaled.get_mpz_t(), p_.get_den_mpz_t());
  BigInt low = prefix & BigInt("18446744073709551615");
  BigInt high = prefix >> 64;
  hi_ = static_cast<std::uint64_t>(mpz_get_ui(high.get_mpz_t()));
  lo_ = static_cast<std::uint64_t>(mpz_get_ui(low.get_mpz_t()));
}

bool BernoulliSampler::operator()(RandomStream& rng) const {
  if (p_ == 1) return true;
  const std::uint64_t u_hi = rng.next_u64();
  if (u_hi != hi_) return u_hi < hi_;
  const std::uint64_t u_lo = rng.next_u64();
  if (u_lo != lo_) return u_lo < lo_;
  // The first 128 bits tie: keep extracting digits of p exactly.
  BigInt r = remainder_;
  const BigInt& den = p_.get_den();
  while (r != 0) {
    std::uint64_t word = rng.next_u64();
    for (int b = 63; b >= 0; --b) {
      r *= 2;
      const bool p_bit = r >= den;
      if (p_bit) r -= den;
      const bool u_bit = (word >> b) & 1U;
      if (u_bit != p_bit) return p_bit;
      if (r == 0) return false;
    }
  }
  return false;
}

}  // namespace weaver
