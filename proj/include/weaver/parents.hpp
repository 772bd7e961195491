#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "weaver/random_stream.hpp"

namespace weaver {

/// A parent population H_0 or H_1. Every family is closed under affine maps,
/// so standardizing a pair never changes the family.
class ParentDistribution {
 public:
  enum class Family { point_mass, bernoulli, uniform, gaussian };

  static ParentDistribution point_mass(double value);
  /// Takes `high` with probability q and `low` otherwise.
  static ParentDistribution bernoulli(double q, double low = 0.0, double high = 1.0);
  static ParentDistribution uniform(double a, double b);
  static ParentDistribution gaussian(double mean, double variance);

  /// "point:c", "bernoulli:q[,low,high]", "uniform:a,b", "gauss:mean,variance".
  static ParentDistribution parse(std::string_view spec);

  Family family() const { return family_; }
  double mean() const;
  double variance() const;

  /// Distribution of shift + scale * X.
  ParentDistribution affine(double shift, double scale) const;

  double sample(RandomStream& rng) const;

  /// Round-trips through parse().
  std::string describe() const;

 private:
  ParentDistribution(Family family, double a, double b, double c) : family_(family), a_(a), b_(b), c_(c) {}

  Family family_;
  // point: a = value. bernoulli: a = q, b = low, c = high.
  // uniform: a, b = endpoints. gaussian: a = mean, b = variance.
  double a_;
  double b_;
  double c_;
};

/// Maps x to (x - mean(h0)) / (mean(h1) - mean(h0)) so the means become 0 and 1.
std::pair<ParentDistribution, ParentDistribution> standardize_parents(const ParentDistribution& h0,
                                                                      const ParentDistribution& h1);

/// "spec0;spec1".
std::pair<ParentDistribution, ParentDistribution> parse_parent_pair(std::string_view spec);

}  // namespace weaver
