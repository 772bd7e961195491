#include "weaver/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "weaver/analysis.hpp"
#include "weaver/errors.hpp"

namespace weaver {
namespace {

constexpr double kStandardizedTolerance = 1e-12;

void require_standardized(const ParentDistribution& h0, const ParentDistribution& h1) {
  if (std::abs(h0.mean()) > kStandardizedTolerance || std::abs(h1.mean() - 1.0) > kStandardizedTolerance)
    throw ContractError("parents must be standardized to means 0 and 1 (got " + h0.describe() + " and " +
                        h1.describe() + "); call standardize_parents first");
}

void require_draw_depth(unsigned n) {
  if (n < 1) throw RangeError("n must be at least 1");
  if (n > kMaxDrawDepth)
    throw CapacityError("raw exponential sampling is capped at n = " + std::to_string(kMaxDrawDepth) +
                        " (2^n - 1 draws per run), got n = " + std::to_string(n));
}

// Calls body(r) for r in [0, count), split into contiguous chunks over worker
// threads. body must only write to slot r of its output.
template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
  if (threads <= 1) {
    for (std::uint64_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([=, &body] {
      for (std::uint64_t r = begin; r < end; ++r) body(r);
    });
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SelectionPath draw_selection_path(unsigned n, const Rational& p, RandomStream& rng) {
  if (n < 1) throw RangeError("n must be at least 1");
  if (n > kMaxPathDepth) throw CapacityError("selection paths are capped at n = " + std::to_string(kMaxPathDepth));
  const WeaverParams checked(n, p);
  const BernoulliSampler choose(checked.p());
  std::uint64_t k = 0;
  for (unsigned j = 0; j < n; ++j)
    if (choose(rng)) k |= std::uint64_t{1} << j;
  return SelectionPath(n, k);
}

SampleRun run_exponential_sample(unsigned n, const ParentDistribution& h0, const ParentDistribution& h1,
                                 const Rational& p, RandomStream& rng) {
  require_draw_depth(n);
  require_standardized(h0, h1);
  SampleRun run;
  run.seed = rng.seed();
  run.stream = rng.stream();
  run.path = draw_selection_path(n, p, rng);
  run.block_sums.resize(n);
  for (unsigned j = 1; j <= n; ++j) {
    const ParentDistribution& parent = run.path.bit(j - 1) ? h1 : h0;
    const std::uint64_t block_size = std::uint64_t{1} << (j - 1);
    double t = 0.0;
    for (std::uint64_t i = 0; i < block_size; ++i) t += parent.sample(rng);
    run.block_sums[j - 1] = t;
  }
  run.total = pairwise_sum(run.block_sums);
  run.mean = run.total / static_cast<double>((std::uint64_t{1} << n) - 1);
  run.conditional_mean = realization_value(run.path.k(), n);
  return run;
}

double sample_mean_variance(const WeaverParams& params, double var0, double var1) {
  const double p = to_double(params.p());
  const double draws = static_cast<double>((std::uint64_t{1} << std::min(params.n(), 63U)) - 1);
  return to_double(exact_variance(params)) + (p * var1 + (1.0 - p) * var0) / draws;
}

std::vector<double> simulate_sample_means(unsigned n, const ParentDistribution& h0,
                                          const ParentDistribution& h1, const Rational& p,
                                          std::uint64_t replications, std::uint64_t seed,
                                          unsigned threads) {
  require_draw_depth(n);
  require_standardized(h0, h1);
  const WeaverParams checked(n, p);
  std::vector<double> means(replications);
  parallel_for(replications, threads, [&](std::uint64_t r) {
    RandomStream rng(seed, r);
    means[r] = run_exponential_sample(n, h0, h1, checked.p(), rng).mean;
  });
  return means;
}

std::vector<std::uint64_t> simulate_leaf_indices(unsigned n, const Rational& p, std::uint64_t replications,
                                                 std::uint64_t seed, unsigned threads) {
  const WeaverParams checked(n, p);
  std::vector<std::uint64_t> leaves(replications);
  parallel_for(replications, threads, [&](std::uint64_t r) {
    RandomStream rng(seed, r);
    leaves[r] = draw_selection_path(n, checked.p(), rng).k();
  });
  return leaves;
}

MomentReport summarize_sample_means(std::span<const double> means, const WeaverParams& params, double var0,
                                    double var1) {
  const std::size_t count = means.size();
  if (count < 2) throw RangeError("need at least two replications to summarise");
  const double N = static_cast<double>(count);
  MomentReport report;
  report.replications = count;
  report.empirical_mean = pairwise_sum(means) / N;

  std::vector<double> sq(count), quad(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = means[i] - report.empirical_mean;
    sq[i] = d * d;
    quad[i] = sq[i] * sq[i];
  }
  const double m2 = pairwise_sum(sq) / N;
  const double m4 = pairwise_sum(quad) / N;
  report.empirical_variance = m2 * N / (N - 1.0);
  report.exact_mean = exact_mean(params);
  report.exact_variance = sample_mean_variance(params, var0, var1);
  report.standard_error = std::sqrt(report.empirical_variance / N);
  report.z_score = report.standard_error > 0.0
                       ? (report.empirical_mean - to_double(report.exact_mean)) / report.standard_error
                       : 0.0;
  // Large-sample standard error of the sample variance: sqrt((m4 - m2^2) / N).
  report.variance_standard_error = std::sqrt(std::max(m4 - m2 * m2, 0.0) / N);
  report.variance_z_score = report.variance_standard_error > 0.0
                                ? (report.empirical_variance - report.exact_variance) /
                                      report.variance_standard_error
                                : 0.0;
  return report;
}

MomentReport monte_carlo_moments(unsigned n, const ParentDistribution& h0, const ParentDistribution& h1,
                                 const Rational& p, std::uint64_t replications, std::uint64_t seed,
                                 unsigned threads) {
  if (replications < 100) throw RangeError("monte_carlo_moments needs at least 100 replications");
  const WeaverParams params(n, p);
  const auto means = simulate_sample_means(n, h0, h1, params.p(), replications, seed, threads);
  return summarize_sample_means(means, params, h0.variance(), h1.variance());
}

double dyadic_ks_distance(std::span<const double> samples, const Rational& p, unsigned level) {
  if (samples.empty()) throw RangeError("no samples");
  if (level < 1) throw RangeError("level must be at least 1");
  const WeaverParams params(level, p);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double N = static_cast<double>(sorted.size());
  double worst = 0.0;
  const std::uint64_t cells = std::uint64_t{1} << level;
  // Interior points only: the endpoints carry atoms for finite n.
  for (std::uint64_t k = 1; k < cells; ++k) {
    const DyadicPoint point(level, k);
    const double v = to_double(point.value());
    const double below = static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    const double exact = to_double(cdf_at_dyadic(point, params));
    worst = std::max(worst, std::abs(below / N - exact));
  }
  return worst;
}

}  // namespace weaver
