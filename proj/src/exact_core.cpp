#include "weaver/exact_core.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "weaver/errors.hpp"

namespace weaver {
namespace {

void require_indexable(unsigned n) {
  if (n > kMaxIndexBits)
    throw CapacityError("leaf indices need n <= " + std::to_string(kMaxIndexBits) + ", got n = " +
                        std::to_string(n));
}

void require_leaf(std::uint64_t k, unsigned n) {
  require_indexable(n);
  if (k >= (std::uint64_t{1} << n))
    throw RangeError("leaf index " + std::to_string(k) + " outside [0, 2^" + std::to_string(n) + ")");
}

void require_materializable(unsigned n, unsigned cap) {
  if (n > cap || n > kMaxIndexBits)
    throw CapacityError("n = " + std::to_string(n) + " exceeds the materialization cap of " +
                        std::to_string(cap));
}

}  // namespace

WeaverParams::WeaverParams(unsigned n, Rational p) : n_(n), p_(std::move(p)) {
  p_.canonicalize();
  if (n_ < 1) throw RangeError("n must be at least 1");
  if (p_ <= 0 || p_ >= 1) throw RangeError("p must lie strictly inside (0, 1), got " + to_string(p_));
}

SelectionPath::SelectionPath(unsigned n, std::uint64_t k) : n_(n), k_(k) { require_leaf(k, n); }

SelectionPath SelectionPath::from_bits(std::span<const std::uint8_t> bits) {
  require_indexable(static_cast<unsigned>(bits.size()));
  std::uint64_t k = 0;
  for (std::uint8_t b : bits) {
    if (b > 1) throw RangeError("selection bits must be 0 or 1");
    k = (k << 1) | b;
  }
  return SelectionPath(static_cast<unsigned>(bits.size()), k);
}

std::vector<std::uint8_t> SelectionPath::bits() const {
  std::vector<std::uint8_t> out(n_);
  for (unsigned j = 0; j < n_; ++j) out[n_ - 1 - j] = bit(j) ? 1 : 0;
  return out;
}

unsigned SelectionPath::ones() const { return static_cast<unsigned>(std::popcount(k_)); }

WeaverDist::WeaverDist(WeaverParams params, std::vector<Rational> pmf)
    : params_(std::move(params)) {
  require_indexable(params_.n());
  if (pmf.size() != (std::size_t{1} << params_.n()))
    throw RangeError("pmf length does not match 2^n");
  pmf_ = std::make_shared<const std::vector<Rational>>(std::move(pmf));
}

std::span<const Rational> WeaverDist::pmf() const& {
  if (!pmf_) return {};
  return *pmf_;
}

DyadicPoint::DyadicPoint(unsigned n_, std::uint64_t k_) : n(n_), k(k_) {
  require_indexable(n);
  if (k > (std::uint64_t{1} << n))
    throw RangeError("dyadic numerator " + std::to_string(k) + " exceeds 2^" + std::to_string(n));
}

Rational DyadicPoint::value() const {
  Rational v(from_u64(k), pow2(n));
  v.canonicalize();
  return v;
}

Rational realization_value(std::uint64_t k, unsigned n) {
  require_leaf(k, n);
  Rational y(from_u64(k), mersenne(n));
  y.canonicalize();
  return y;
}

Rational pmf_point(std::uint64_t k, const WeaverParams& params) {
  require_leaf(k, params.n());
  const auto ones = static_cast<unsigned>(std::popcount(k));
  return Rational(pow(params.p(), ones) * pow(params.q(), params.n() - ones));
}

double log2_pmf(unsigned ones, const WeaverParams& params) {
  if (ones > params.n()) throw RangeError("more one-bits than selections");
  const double lp = std::log2(to_double(params.p()));
  const double lq = std::log2(to_double(params.q()));
  return static_cast<double>(ones) * lp + static_cast<double>(params.n() - ones) * lq;
}

double log2_pmf_point(std::uint64_t k, const WeaverParams& params) {
  require_leaf(k, params.n());
  return log2_pmf(static_cast<unsigned>(std::popcount(k)), params);
}

WeaverDist build_pmf_vector(const WeaverParams& params, unsigned cap) {
  require_materializable(params.n(), cap);
  const Rational p = params.p();
  const Rational q = params.q();
  std::vector<Rational> pmf;
  pmf.reserve(std::size_t{1} << params.n());
  pmf.emplace_back(1);
  for (unsigned level = 0; level < params.n(); ++level) {
    const std::size_t half = pmf.size();
    pmf.resize(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
      pmf[half + i] = p * pmf[i];
      pmf[i] *= q;
    }
  }
  return WeaverDist(params, std::move(pmf));
}

std::vector<unsigned> geometric_triangle_row(unsigned n, unsigned cap) {
  require_materializable(n, cap);
  std::vector<unsigned> row{0};
  row.reserve(std::size_t{1} << n);
  for (unsigned level = 0; level < n; ++level) {
    const std::size_t half = row.size();
    for (std::size_t i = 0; i < half; ++i) row.push_back(row[i] + 1);
  }
  return row;
}

BigInt exponent_sum(unsigned n) {
  BigInt s = 0;
  for (unsigned m = 0; m < n; ++m) s = 2 * s + pow2(m);
  return s;
}

Rational cdf_at_dyadic(const DyadicPoint& point, const WeaverParams& params) {
  if (point.n > params.n())
    throw RefinementError("F(" + std::to_string(point.k) + "/2^" + std::to_string(point.n) +
                          ") is not yet stable at depth n = " + std::to_string(params.n()));
  if (point.k == (std::uint64_t{1} << point.n)) return Rational(1);

  // Leaves left of k/2^m are exactly those whose top m choices, read as an
  // integer, are below k. Walk k's bits from the most significant: each one-bit
  // contributes the whole subtree that chose 0 there instead.
  const Rational p = params.p();
  const Rational q = params.q();
  Rational prefix(1);
  Rational total(0);
  for (unsigned i = point.n; i-- > 0;) {
    if ((point.k >> i) & 1U) {
      total += prefix * q;
      prefix *= p;
    } else {
      prefix *= q;
    }
  }
  return total;
}

std::vector<JumpClass> jump_spectrum(const WeaverParams& params) {
  const unsigned n = params.n();
  std::vector<JumpClass> out;
  out.reserve(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    BigInt c;
    mpz_bin_uiui(c.get_mpz_t(), n, j);
    out.push_back({Rational(pow(params.p(), j) * pow(params.q(), n - j)), std::move(c)});
  }
  return out;
}

std::uint64_t mirror_index(std::uint64_t k, unsigned n) {
  require_leaf(k, n);
  return ((std::uint64_t{1} << n) - 1) - k;
}

}  // namespace weaver
