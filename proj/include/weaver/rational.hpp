#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace weaver {

/// Arbitrary-precision integer.
using BigInt = mpz_class;

/// Arbitrary-precision fraction, always canonical (lowest terms, positive
/// denominator) after every arithmetic operation.
using Rational = mpq_class;

/// Parses "a/b", an integer, or a decimal such as "0.375" / "-1.5e-3".
/// Decimals are converted exactly (0.1 becomes 1/10, never a binary double).
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "a/b" in lowest terms, or just "a" when the denominator is one.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

/// Nearest binary64 (GMP rounds toward zero; good to 1 ulp).
double to_double(const Rational& value);

Rational pow(const Rational& base, unsigned exponent);
BigInt pow2(unsigned exponent);

BigInt from_u64(std::uint64_t value);

/// 2^n - 1 as an exact integer.
BigInt mersenne(unsigned n);

}  // namespace weaver
