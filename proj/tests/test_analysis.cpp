#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weaver/analysis.hpp"
#include "weaver/errors.hpp"

using namespace weaver;

TEST_CASE("mean is p at every depth") {
  CHECK(exact_mean(WeaverParams(3, Rational(2, 3))) == Rational(2, 3));
  CHECK(exact_mean(WeaverParams(1, Rational(1, 7))) == Rational(1, 7));
  const Rational p(5, 11);
  CHECK(oracle::enumerated_mean(12, p) == p);
  CHECK(exact_mean(WeaverParams(12, p)) == oracle::enumerated_mean(12, p));
  for (unsigned n = 1; n <= 16; n += 3) CHECK(oracle::enumerated_mean(n, Rational(2, 9)) == Rational(2, 9));
}

TEST_CASE("variance closed form") {
  const Rational p(3, 10);
  CHECK(exact_variance(WeaverParams(1, p)) == p * (1 - p));
  CHECK(exact_variance(WeaverParams(2, p)) == Rational(5, 9) * p * (1 - p));
  CHECK(exact_variance(WeaverParams(3, Rational(2, 3))) == Rational(2, 21));
  CHECK(oracle::enumerated_central(3, Rational(2, 3), Rational(2, 3)) == Rational(2, 21));
}

TEST_CASE("variance closed form equals enumeration for n <= 12") {
  for (const auto& p : {Rational(1, 2), Rational(1, 3), Rational(4, 5)})
    for (unsigned n = 1; n <= 12; ++n)
      CHECK(exact_variance(WeaverParams(n, p)) == oracle::enumerated_central(n, p, p));
}

TEST_CASE("variance decreases strictly toward the limit") {
  for (const auto& p : {Rational(1, 2), Rational(2, 3), Rational(1, 100), Rational(97, 100)}) {
    Rational previous = exact_variance(WeaverParams(1, p));
    for (unsigned n = 2; n <= 64; ++n) {
      const Rational current = exact_variance(WeaverParams(n, p));
      CHECK(current < previous);
      CHECK(current > limit_variance(p));
      previous = current;
    }
  }
}

TEST_CASE("raw moments") {
  const WeaverParams params(3, Rational(2, 3));
  CHECK(exact_moment(params, 1) == exact_mean(params));
  CHECK(exact_moment(params, 2) == Rational(2, 21) + Rational(4, 9));
  CHECK(exact_moment(params, 2) == Rational(34, 63));

  const WeaverParams w(4, Rational(1, 3));
  CHECK(exact_moment(w, 2) > exact_moment(w, 3));
  CHECK(exact_moment(w, 3) > exact_moment(w, 4));
  for (unsigned j = 1; j <= 5; ++j) CHECK(exact_moment(w, j) == oracle::enumerated_raw_moment(4, Rational(1, 3), j));

  CHECK_THROWS_AS(exact_moment(params, 0), RangeError);
  CHECK_THROWS_AS(exact_moment(WeaverParams(30, Rational(1, 2)), 2), CapacityError);
}

TEST_CASE("second moment minus squared mean is the variance, n <= 16") {
  for (const auto& p : {Rational(1, 3), Rational(5, 8)}) {
    for (unsigned n = 1; n <= 16; ++n) {
      const WeaverParams params(n, p);
      const Rational mean = exact_moment(params, 1);
      CHECK(exact_moment(params, 2) - mean * mean == exact_variance(params));
    }
  }
}

TEST_CASE("weaving / merging table") {
  const std::vector<long> weaving{1, 5, 21, 85, 341, 1365};
  const std::vector<long> merging{0, 4, 28, 140, 620, 2604};
  const std::vector<long> denom{1, 9, 49, 225, 961, 3969};
  for (unsigned n = 1; n <= 6; ++n) {
    const auto row = variance_decomposition(n, Rational(1, 2));
    CHECK(row.weaving == weaving[n - 1]);
    CHECK(row.merging == merging[n - 1]);
    CHECK(row.denom == denom[n - 1]);
    CHECK(row.weaving_share + row.merging_share == 1);
  }
  const auto row2 = variance_decomposition(2, Rational(1, 3));
  CHECK(row2.weaving_share == Rational(5, 9));
  CHECK(row2.merging_share == Rational(4, 9));
  const auto row5 = variance_decomposition(5, Rational(1, 3));
  CHECK(to_double(row5.weaving_share) == doctest::Approx(0.355).epsilon(1e-3));
}

TEST_CASE("trace identity and off-diagonal sum") {
  for (unsigned n = 1; n <= 40; ++n) {
    const auto row = variance_decomposition(n, Rational(1, 2));
    BigInt trace = 0, offdiag = 0;
    for (unsigned j = 0; j < n; ++j) {
      trace += pow2(2 * j);
      offdiag += pow2(j) * (mersenne(n) - pow2(j));
    }
    CHECK(row.weaving == trace);
    CHECK(row.merging == offdiag);
    CHECK(row.weaving + row.merging == row.denom);
  }
}

TEST_CASE("merged variable is Bernoulli(p)") {
  const auto half = merged_variable_stats(WeaverParams(7, Rational(1, 2)));
  CHECK(half.mean == Rational(1, 2));
  CHECK(half.variance == Rational(1, 4));
  const auto w = merged_variable_stats(WeaverParams(3, Rational(2, 3)));
  CHECK(w.mean == Rational(2, 3));
  CHECK(w.variance == Rational(2, 9));
  // Beyond the cap the closed form is used.
  const auto deep = merged_variable_stats(WeaverParams(40, Rational(2, 3)));
  CHECK(deep.mean == Rational(2, 3));
}

TEST_CASE("law of total variance: p(1-p) = var(Y) + E[y(1-y)]") {
  const Rational p(3, 7);
  const WeaverParams params(4, p);
  CHECK(p * (1 - p) == exact_variance(params) + oracle::enumerated_conditional_variance(4, p));
  for (unsigned n = 1; n <= 16; ++n) {
    const WeaverParams w(n, Rational(2, 5));
    CHECK(exact_variance(w) + merging_variance(w) == w.p() * w.q());
  }
  for (unsigned n = 1; n <= 10; ++n)
    CHECK(merging_variance(WeaverParams(n, p)) == oracle::enumerated_conditional_variance(n, p));
}

TEST_CASE("limit variance") {
  CHECK(limit_variance(Rational(1, 2)) == Rational(1, 12));
  CHECK(limit_variance(Rational(2, 3)) == Rational(2, 27));
  const Rational p(2, 3);
  const WeaverParams params(40, p);
  const Rational gap = exact_variance(params) / (p * (1 - p)) - Rational(1, 3);
  CHECK(gap > 0);
  CHECK(gap < Rational(BigInt(1), BigInt("1000000000000")));
  CHECK_THROWS_AS(limit_variance(Rational(1)), RangeError);
}

TEST_CASE("local density") {
  for (std::uint64_t k : {0ULL, 5ULL, 1023ULL}) CHECK(local_density(k, WeaverParams(10, Rational(1, 2))) == 1.0);
  const WeaverParams w(3, Rational(2, 3));
  CHECK(local_density_exact(7, w) == Rational(64, 27));
  CHECK(local_density_exact(0, w) == Rational(8, 27));
  CHECK(local_density(7, w) == doctest::Approx(64.0 / 27.0).epsilon(1e-12));
  CHECK(local_density(0, w) == doctest::Approx(8.0 / 27.0).epsilon(1e-12));
  CHECK_THROWS_AS(local_density(8, w), RangeError);
  // Log-space keeps large depths finite where 2^n p_k would underflow in pieces.
  const WeaverParams deep(60, Rational(2, 3));
  const double g = local_density((std::uint64_t{1} << 60) - 1, deep);
  CHECK(g == doctest::Approx(std::pow(4.0 / 3.0, 60)).epsilon(1e-12));
}

TEST_CASE("roughness report") {
  const auto flat = roughness_report(Rational(1, 2), 7);
  CHECK(flat.ratio_exact == 1);
  CHECK(flat.fractal_dimension == 0.0);
  CHECK(flat.log2_left_factor == doctest::Approx(0.0));
  CHECK(flat.log2_right_factor == doctest::Approx(0.0));

  const auto r = roughness_report(Rational(2, 3), 3);
  CHECK(r.f == 2);
  CHECK(r.ratio_exact == 8);
  CHECK(r.ratio == 8.0);
  CHECK(r.fractal_dimension == doctest::Approx(1.0).epsilon(1e-12));

  // The rightmost over leftmost descendant masses after l refinements is f^l.
  const Rational p(2, 3);
  const unsigned n = 2, level = 5;
  for (std::uint64_t k = 0; k < 4; ++k) {
    const auto leftmost = oracle::leaf_mass(k << level, n + level, p);
    const auto rightmost = oracle::leaf_mass((k << level) | ((1U << level) - 1), n + level, p);
    CHECK(rightmost / leftmost == roughness_report(p, level).ratio_exact);
  }

  const auto ten = roughness_report(p, 10);
  const Rational leaf = pmf_point(2, WeaverParams(3, p));
  const double pk = to_double(leaf);
  CHECK(std::exp2(ten.log2_left_factor) * pk < pk);
  CHECK(std::exp2(ten.log2_right_factor) * pk > pk);
  CHECK(pow(Rational(1, 3), 10) * pow2(10) * leaf < leaf);
  CHECK(pow(Rational(4, 3), 10) * leaf > leaf);
}

TEST_CASE("p-model cell masses equal the weaver pmf") {
  const auto cells = pmodel_cell_masses(3, Rational(2, 3));
  const std::vector<Rational> expected{Rational(1, 27), Rational(2, 27), Rational(2, 27), Rational(4, 27),
                                       Rational(2, 27), Rational(4, 27), Rational(4, 27), Rational(8, 27)};
  CHECK(cells == expected);
  // Density 8 p^2 (1-p) on (6/8, 7/8) times the cell width 1/8.
  CHECK(cells[6] == Rational(8) * Rational(4, 9) * Rational(1, 3) / 8);
  const Rational p(3, 11);
  const auto first = pmodel_cell_masses(1, p);
  CHECK(first == std::vector<Rational>{Rational(8, 11), p});

  const Rational p8(4, 9);
  const auto masses = pmodel_cell_masses(8, p8);
  const WeaverDist dist = build_pmf_vector(WeaverParams(8, p8));
  CHECK(std::equal(masses.begin(), masses.end(), dist.pmf().begin(), dist.pmf().end()));
  CHECK_THROWS_AS(pmodel_cell_masses(25, p8), CapacityError);
}
