#include "weaver/analysis.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "weaver/errors.hpp"

namespace weaver {
namespace {

void require_materializable(unsigned n, unsigned cap) {
  if (n > cap || n > kMaxIndexBits)
    throw CapacityError("n = " + std::to_string(n) + " exceeds the materialization cap of " +
                        std::to_string(cap));
}

void require_open_unit(const Rational& p) {
  if (p <= 0 || p >= 1) throw RangeError("p must lie strictly inside (0, 1), got " + to_string(p));
}

BigInt weaving_count(unsigned n) { return BigInt((pow2(2 * n) - 1) / 3); }

}  // namespace

Rational exact_mean(const WeaverParams& params) { return params.p(); }

Rational exact_variance(const WeaverParams& params) {
  const unsigned n = params.n();
  const BigInt m = mersenne(n);
  Rational share(weaving_count(n), BigInt(m * m));
  share.canonicalize();
  return Rational(share * params.p() * params.q());
}

Rational exact_moment(const WeaverParams& params, unsigned j, unsigned cap) {
  if (j < 1) throw RangeError("moment order must be at least 1");
  const unsigned n = params.n();
  require_materializable(n, cap);

  // Common denominator: p = a/b, so p_k y_k^j = a^#1 (b-a)^#0 k^j / (b^n (2^n-1)^j).
  const BigInt& a = params.p().get_num();
  const BigInt& b = params.p().get_den();
  const BigInt c = b - a;
  std::vector<BigInt> a_pow(n + 1), c_pow(n + 1);
  a_pow[0] = 1;
  c_pow[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    a_pow[i] = a_pow[i - 1] * a;
    c_pow[i] = c_pow[i - 1] * c;
  }
  BigInt numerator = 0;
  BigInt kj;
  const std::uint64_t leaves = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < leaves; ++k) {
    const auto ones = static_cast<unsigned>(std::popcount(k));
    mpz_pow_ui(kj.get_mpz_t(), from_u64(k).get_mpz_t(), j);
    numerator += a_pow[ones] * c_pow[n - ones] * kj;
  }
  BigInt bn, mj;
  mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), n);
  mpz_pow_ui(mj.get_mpz_t(), mersenne(n).get_mpz_t(), j);
  Rational out(numerator, BigInt(bn * mj));
  out.canonicalize();
  return out;
}

DecompositionRow variance_decomposition(unsigned n, const Rational& p) {
  if (n < 1) throw RangeError("n must be at least 1");
  require_open_unit(p);
  DecompositionRow row;
  row.n = n;
  const BigInt m = mersenne(n);
  row.denom = m * m;
  row.weaving = weaving_count(n);
  row.merging = BigInt(2 * (pow2(2 * n) - 3 * pow2(n) + 2) / 3);
  row.weaving_share = Rational(row.weaving, row.denom);
  row.weaving_share.canonicalize();
  row.merging_share = Rational(row.merging, row.denom);
  row.merging_share.canonicalize();
  return row;
}

MergedStats merged_variable_stats(const WeaverParams& params, unsigned cap) {
  Rational prob_one;
  if (params.n() <= cap && params.n() <= kMaxIndexBits) {
    // sum_k p_k k / (2^n - 1), grouped by leaf index with a common denominator.
    const unsigned n = params.n();
    const BigInt& a = params.p().get_num();
    const BigInt& b = params.p().get_den();
    BigInt numerator = 0;
    BigInt term;
    const std::uint64_t leaves = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < leaves; ++k) {
      const auto ones = static_cast<unsigned>(std::popcount(k));
      BigInt ap, cp;
      mpz_pow_ui(ap.get_mpz_t(), a.get_mpz_t(), ones);
      mpz_pow_ui(cp.get_mpz_t(), BigInt(b - a).get_mpz_t(), n - ones);
      numerator += ap * cp * from_u64(k);
    }
    BigInt bn;
    mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), n);
    prob_one = Rational(numerator, BigInt(bn * mersenne(n)));
    prob_one.canonicalize();
  } else {
    prob_one = params.p();
  }
  return {prob_one, Rational(prob_one * (1 - prob_one))};
}

Rational merging_variance(const WeaverParams& params) {
  const DecompositionRow row = variance_decomposition(params.n(), params.p());
  return Rational(row.merging_share * params.p() * params.q());
}

Rational limit_variance(const Rational& p) {
  require_open_unit(p);
  return Rational(p * (1 - p) / 3);
}

double local_density(std::uint64_t k, const WeaverParams& params) {
  return std::exp2(static_cast<double>(params.n()) + log2_pmf_point(k, params));
}

Rational local_density_exact(std::uint64_t k, const WeaverParams& params) {
  return Rational(pmf_point(k, params) * pow2(params.n()));
}

RoughnessReport roughness_report(const Rational& p, unsigned level) {
  require_open_unit(p);
  RoughnessReport r;
  r.p = p;
  r.f = p / (1 - p);
  r.level = level;
  r.ratio_exact = pow(r.f, level);
  r.ratio = to_double(r.ratio_exact);
  r.fractal_dimension = p == Rational(1, 2) ? 0.0 : std::log(to_double(r.f)) / std::log(2.0);
  const double l = static_cast<double>(level);
  r.log2_left_factor = l * (1.0 + std::log2(to_double(Rational(1 - p))));
  r.log2_right_factor = l * (1.0 + std::log2(to_double(p)));
  return r;
}

std::vector<Rational> pmodel_cell_masses(unsigned n, const Rational& p, unsigned cap) {
  if (n < 1) throw RangeError("n must be at least 1");
  require_open_unit(p);
  require_materializable(n, cap);
  const Rational left = 2 * (1 - p);
  const Rational right = 2 * p;
  // Density per cell, refined locally: cell k of depth m owns cells 2k, 2k+1.
  std::vector<Rational> density{Rational(1)};
  for (unsigned level = 0; level < n; ++level) {
    std::vector<Rational> next(2 * density.size());
    for (std::size_t k = 0; k < density.size(); ++k) {
      next[2 * k] = left * density[k];
      next[2 * k + 1] = right * density[k];
    }
    density = std::move(next);
  }
  const Rational width(BigInt(1), pow2(n));
  for (auto& d : density) d *= width;
  return density;
}

}  // namespace weaver
