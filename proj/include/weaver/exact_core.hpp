#pragma once

// Exact construction and querying of the weaver distribution W(n, p).
//
// Leaf k in [0, 2^n) is the integer whose binary digits (b_{n-1}, ..., b_0)
// record which population served each block; it carries the realization
// k / (2^n - 1) and the mass p^{#1} (1 - p)^{#0}.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "weaver/rational.hpp"

namespace weaver {

/// Full pmf vectors (2^n rationals) are only built up to this depth.
inline constexpr unsigned kDefaultMaterializationCap = 24;

/// Leaf indices are 64-bit, so index-addressed queries stop here.
inline constexpr unsigned kMaxIndexBits = 63;

class WeaverParams {
 public:
  /// Requires n >= 1 and 0 < p < 1; throws RangeError otherwise.
  WeaverParams(unsigned n, Rational p);

  unsigned n() const { return n_; }
  const Rational& p() const { return p_; }
  Rational q() const { return Rational(1 - p_); }
  /// Odds ratio f = p / (1 - p).
  Rational odds() const { return Rational(p_ / (1 - p_)); }

 private:
  unsigned n_;
  Rational p_;
};

/// The Bernoulli choice vector of one cascade path, stored as its leaf index.
class SelectionPath {
 public:
  SelectionPath(unsigned n, std::uint64_t k);
  /// bits[0] is b_{n-1} (most significant), bits[n-1] is b_0.
  static SelectionPath from_bits(std::span<const std::uint8_t> bits);

  unsigned n() const { return n_; }
  std::uint64_t k() const { return k_; }
  /// b_j, the choice made for block j + 1.
  bool bit(unsigned j) const { return (k_ >> j) & 1U; }
  std::vector<std::uint8_t> bits() const;
  unsigned ones() const;
  unsigned zeros() const { return n_ - ones(); }

  friend bool operator==(const SelectionPath&, const SelectionPath&) = default;

 private:
  unsigned n_;
  std::uint64_t k_;
};

/// W(n, p), optionally with its exact pmf vector attached. Immutable; copies
/// share the materialized vector.
class WeaverDist {
 public:
  explicit WeaverDist(WeaverParams params) : params_(std::move(params)) {}
  WeaverDist(WeaverParams params, std::vector<Rational> pmf);

  const WeaverParams& params() const { return params_; }
  bool materialized() const { return pmf_ != nullptr; }
  /// Empty span when not materialized.
  std::span<const Rational> pmf() const&;
  std::span<const Rational> pmf() const&& = delete;

 private:
  WeaverParams params_;
  std::shared_ptr<const std::vector<Rational>> pmf_;
};

/// The dyadic point k / 2^n with 0 <= k <= 2^n.
struct DyadicPoint {
  DyadicPoint(unsigned n, std::uint64_t k);
  Rational value() const;

  unsigned n;
  std::uint64_t k;
};

struct JumpClass {
  Rational height;
  BigInt multiplicity;
};

Rational realization_value(std::uint64_t k, unsigned n);

/// p^{ones(k)} (1 - p)^{n - ones(k)} in O(n), without materializing anything.
Rational pmf_point(std::uint64_t k, const WeaverParams& params);

/// log2 of the mass of any leaf with `ones` one-bits. Works for every n,
/// including depths far beyond the index range; relative accuracy ~1e-12.
double log2_pmf(unsigned ones, const WeaverParams& params);
double log2_pmf_point(std::uint64_t k, const WeaverParams& params);

/// Builds p_{m+1} = ((1 - p) p_m, p p_m) from p_0 = (1).
WeaverDist build_pmf_vector(const WeaverParams& params,
                            unsigned cap = kDefaultMaterializationCap);

/// Row n of the exponent triangle: entry k is the number of one-bits of k.
std::vector<unsigned> geometric_triangle_row(unsigned n,
                                             unsigned cap = kDefaultMaterializationCap);

/// s_n from s_0 = 0, s_{m+1} = 2 s_m + 2^m.
BigInt exponent_sum(unsigned n);

/// F(k / 2^m) = P(Y_n < k / 2^m) for m <= n, with F(1) = 1. No leaf sits on an
/// interior dyadic point, so < and <= agree there. The value does not depend
/// on n once n >= m. O(n) via the prefix structure of the leaf index.
Rational cdf_at_dyadic(const DyadicPoint& point, const WeaverParams& params);

/// Heights p^j (1 - p)^{n-j} with multiplicities C(n, j), j = 0..n.
std::vector<JumpClass> jump_spectrum(const WeaverParams& params);

/// 2^n - 1 - k: the leaf whose path has every choice flipped.
std::uint64_t mirror_index(std::uint64_t k, unsigned n);

}  // namespace weaver
