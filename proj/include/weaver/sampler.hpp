#pragma once

// Exponential sampling: block j holds 2^{j-1} iid draws from H_1 when the
// j-th Bernoulli(p) choice is one, from H_0 otherwise.

#include <cstdint>
#include <span>
#include <vector>

#include "weaver/exact_core.hpp"
#include "weaver/parents.hpp"
#include "weaver/random_stream.hpp"

namespace weaver {

/// Raw draws (2^n - 1 per run) are only simulated up to this depth.
inline constexpr unsigned kMaxDrawDepth = 30;

/// Paths without draws (conditional means only) go up to the index range.
inline constexpr unsigned kMaxPathDepth = 63;

struct SampleRun {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  SelectionPath path{1, 0};
  std::vector<double> block_sums;  // T_1 .. T_n
  double total = 0.0;              // S_n
  double mean = 0.0;               // S_n / (2^n - 1)
  Rational conditional_mean;       // Y_n = k / (2^n - 1)
};

struct MomentReport {
  std::uint64_t replications = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;  // unbiased
  Rational exact_mean;
  double exact_variance = 0.0;
  double standard_error = 0.0;  // of the empirical mean
  double z_score = 0.0;
  double variance_standard_error = 0.0;  // of the empirical variance
  double variance_z_score = 0.0;
};

SelectionPath draw_selection_path(unsigned n, const Rational& p, RandomStream& rng);

/// Requires standardized parents (means 0 and 1, within 1e-12) and
/// n <= kMaxDrawDepth. Draws the path first, then the blocks in order.
SampleRun run_exponential_sample(unsigned n, const ParentDistribution& h0, const ParentDistribution& h1,
                                 const Rational& p, RandomStream& rng);

/// Exact variance of the sample mean with parent variances var0 and var1:
/// sigma^2(Y_n) + (p var1 + (1 - p) var0) / (2^n - 1).
double sample_mean_variance(const WeaverParams& params, double var0, double var1);

/// Runs `replications` independent samples; replication r uses
/// RandomStream(seed, r). The sample means are returned in replication order.
std::vector<double> simulate_sample_means(unsigned n, const ParentDistribution& h0,
                                          const ParentDistribution& h1, const Rational& p,
                                          std::uint64_t replications, std::uint64_t seed,
                                          unsigned threads = 0);

/// Leaf indices of `replications` independent paths (no draws), n <= 63.
std::vector<std::uint64_t> simulate_leaf_indices(unsigned n, const Rational& p,
                                                 std::uint64_t replications, std::uint64_t seed,
                                                 unsigned threads = 0);

/// Requires replications >= 100.
MomentReport monte_carlo_moments(unsigned n, const ParentDistribution& h0, const ParentDistribution& h1,
                                 const Rational& p, std::uint64_t replications, std::uint64_t seed,
                                 unsigned threads = 0);

/// Summarises already simulated sample means against the exact law.
MomentReport summarize_sample_means(std::span<const double> means, const WeaverParams& params,
                                    double var0, double var1);

/// max_k |F_emp(k/2^level) - F(k/2^level)| where F is the stable CDF of the
/// limit law at those dyadic points and F_emp counts samples below the point.
double dyadic_ks_distance(std::span<const double> samples, const Rational& p, unsigned level);

/// Pairwise (cascade) summation in fixed index order.
double pairwise_sum(std::span<const double> values);

}  // namespace weaver
