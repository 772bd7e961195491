#include "weaver/parents.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "weaver/errors.hpp"

namespace weaver {
namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view whole) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(value))
      throw ParseError("bad parent parameter '" + std::string(item) + "' in '" + std::string(whole) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void require_arity(const std::vector<double>& args, std::size_t lo, std::size_t hi, std::string_view whole) {
  if (args.size() < lo || args.size() > hi)
    throw ParseError("wrong number of parameters in '" + std::string(whole) + "'");
}

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

ParentDistribution ParentDistribution::point_mass(double value) {
  if (!std::isfinite(value)) throw RangeError("point mass must be finite");
  return {Family::point_mass, value, 0.0, 0.0};
}

ParentDistribution ParentDistribution::bernoulli(double q, double low, double high) {
  if (!(q >= 0.0 && q <= 1.0)) throw RangeError("bernoulli probability outside [0, 1]");
  if (!std::isfinite(low) || !std::isfinite(high)) throw RangeError("bernoulli values must be finite");
  return {Family::bernoulli, q, low, high};
}

ParentDistribution ParentDistribution::uniform(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a <= b)) throw RangeError("uniform needs finite a <= b");
  return {Family::uniform, a, b, 0.0};
}

ParentDistribution ParentDistribution::gaussian(double mean, double variance) {
  if (!std::isfinite(mean) || !std::isfinite(variance) || variance < 0.0)
    throw RangeError("gaussian needs a finite mean and non-negative variance");
  return {Family::gaussian, mean, variance, 0.0};
}

ParentDistribution ParentDistribution::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("parent spec needs 'family:params', got '" + std::string(spec) + "'");
  const std::string_view family = spec.substr(0, colon);
  const auto args = parse_numbers(spec.substr(colon + 1), spec);
  if (family == "point" || family == "point-mass") {
    require_arity(args, 1, 1, spec);
    return point_mass(args[0]);
  }
  if (family == "bernoulli") {
    require_arity(args, 1, 3, spec);
    if (args.size() == 2) throw ParseError("bernoulli takes q or q,low,high: '" + std::string(spec) + "'");
    return args.size() == 1 ? bernoulli(args[0]) : bernoulli(args[0], args[1], args[2]);
  }
  if (family == "uniform") {
    require_arity(args, 2, 2, spec);
    return uniform(args[0], args[1]);
  }
  if (family == "gauss" || family == "gaussian") {
    require_arity(args, 2, 2, spec);
    return gaussian(args[0], args[1]);
  }
  throw ParseError("unknown parent family '" + std::string(family) + "'");
}

double ParentDistribution::mean() const {
  switch (family_) {
    case Family::point_mass: return a_;
    case Family::bernoulli: return b_ + a_ * (c_ - b_);
    case Family::uniform: return 0.5 * (a_ + b_);
    case Family::gaussian: return a_;
  }
  return 0.0;
}

double ParentDistribution::variance() const {
  switch (family_) {
    case Family::point_mass: return 0.0;
    case Family::bernoulli: return a_ * (1.0 - a_) * (c_ - b_) * (c_ - b_);
    case Family::uniform: return (b_ - a_) * (b_ - a_) / 12.0;
    case Family::gaussian: return b_;
  }
  return 0.0;
}

ParentDistribution ParentDistribution::affine(double shift, double scale) const {
  switch (family_) {
    case Family::point_mass: return point_mass(shift + scale * a_);
    case Family::bernoulli: return bernoulli(a_, shift + scale * b_, shift + scale * c_);
    case Family::uniform: {
      const double lo = shift + scale * a_;
      const double hi = shift + scale * b_;
      return scale >= 0.0 ? uniform(lo, hi) : uniform(hi, lo);
    }
    case Family::gaussian: return gaussian(shift + scale * a_, scale * scale * b_);
  }
  return *this;
}

double ParentDistribution::sample(RandomStream& rng) const {
  switch (family_) {
    case Family::point_mass: return a_;
    case Family::bernoulli: return rng.uniform01() < a_ ? c_ : b_;
    case Family::uniform: return a_ + (b_ - a_) * rng.uniform01();
    case Family::gaussian: return a_ + std::sqrt(b_) * rng.normal();
  }
  return 0.0;
}

std::string ParentDistribution::describe() const {
  switch (family_) {
    case Family::point_mass: return "point:" + format_double(a_);
    case Family::bernoulli:
      return "bernoulli:" + format_double(a_) + "," + format_double(b_) + "," + format_double(c_);
    case Family::uniform: return "uniform:" + format_double(a_) + "," + format_double(b_);
    case Family::gaussian: return "gauss:" + format_double(a_) + "," + format_double(b_);
  }
  return {};
}

std::pair<ParentDistribution, ParentDistribution> standardize_parents(const ParentDistribution& h0,
                                                                      const ParentDistribution& h1) {
  const double m0 = h0.mean();
  const double m1 = h1.mean();
  if (m0 == m1)
    throw DegeneracyError("parent populations share the mean " + format_double(m0) +
                          "; the sample cannot fluctuate between them");
  const double scale = 1.0 / (m1 - m0);
  const double shift = -m0 * scale;
  return {h0.affine(shift, scale), h1.affine(shift, scale)};
}

std::pair<ParentDistribution, ParentDistribution> parse_parent_pair(std::string_view spec) {
  const auto semi = spec.find(';');
  if (semi == std::string_view::npos) throw ParseError("parent pair needs 'h0;h1', got '" + std::string(spec) + "'");
  return {ParentDistribution::parse(spec.substr(0, semi)), ParentDistribution::parse(spec.substr(semi + 1))};
}

}  // namespace weaver
