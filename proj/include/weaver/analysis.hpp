#pragma once

// Closed-form moments of W(n, p), the weaving/merging split of the Bernoulli
// variance, and finite-depth diagnostics of the limit law W(p).

#include <cstdint>
#include <vector>

#include "weaver/exact_core.hpp"
#include "weaver/rational.hpp"

namespace weaver {

/// One row of the weaving/merging table. `denom` is (2^n - 1)^2, `weaving`
/// the trace of the outer-product matrix of block sizes, `merging` the sum of
/// its off-diagonal entries.
struct DecompositionRow {
  unsigned n = 0;
  BigInt denom;
  BigInt weaving;
  BigInt merging;
  Rational weaving_share;
  Rational merging_share;
};

struct RoughnessReport {
  Rational p;
  Rational f;
  unsigned level = 0;
  Rational ratio_exact;  // f^level
  double ratio = 0.0;
  double fractal_dimension = 0.0;  // ln f / ln 2
  // Factors that multiply a leaf mass p_k after `level` refinements, scaled by
  // the 2^level interval count: 2^l (1-p)^l on the leftmost and 2^l p^l on
  // the rightmost descendant. Reported in log2 so large levels stay finite.
  double log2_left_factor = 0.0;
  double log2_right_factor = 0.0;
};

struct MergedStats {
  Rational mean;
  Rational variance;
};

Rational exact_mean(const WeaverParams& params);

/// (4^n - 1) / (3 (2^n - 1)^2) * p (1 - p).
Rational exact_variance(const WeaverParams& params);

/// E Y^j by enumerating all 2^n leaves.
Rational exact_moment(const WeaverParams& params, unsigned j,
                      unsigned cap = kDefaultMaterializationCap);

DecompositionRow variance_decomposition(unsigned n, const Rational& p);

/// Law of Z_n, the 0/1 variable obtained by flipping a y_k-coin at leaf k.
/// P(Z_n = 1) is enumerated as sum_k p_k y_k when n is within `cap`.
MergedStats merged_variable_stats(const WeaverParams& params,
                                  unsigned cap = kDefaultMaterializationCap);

/// Expected conditional variance sum_k p_k y_k (1 - y_k), closed form.
Rational merging_variance(const WeaverParams& params);

/// p (1 - p) / 3.
Rational limit_variance(const Rational& p);

/// g_{k,n} = 2^n p_k, evaluated through log2 so it stays finite for any n.
double local_density(std::uint64_t k, const WeaverParams& params);
Rational local_density_exact(std::uint64_t k, const WeaverParams& params);

RoughnessReport roughness_report(const Rational& p, unsigned level);

/// Mass of (k/2^n, (k+1)/2^n) under the continuous p-model density, obtained
/// by splitting each cell's density into 2(1-p) and 2p on its two halves.
std::vector<Rational> pmodel_cell_masses(unsigned n, const Rational& p,
                                         unsigned cap = kDefaultMaterializationCap);

}  // namespace weaver
