#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "weaver/exact_core.hpp"
#include "weaver/parents.hpp"
#include "weaver/table.hpp"

namespace weaver::cli {

enum class Command { pmf, cdf, triangle, moments, decompose, sample, converge, density };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Name of the environment variable that overrides the materialization cap.
inline constexpr const char* kCapEnvVar = "WEAVER_MATERIALIZATION_CAP";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::pmf;
  unsigned n = 0;
  std::optional<Rational> p;
  std::optional<std::pair<ParentDistribution, ParentDistribution>> parents;
  std::uint64_t replications = 10000;
  std::uint64_t seed = 0;
  Format format = Format::csv;
  std::string output;  // empty: standard output
  unsigned level = 0;  // cdf / converge grid depth; 0 picks the default
  unsigned order = 4;  // highest raw moment for `moments`
  unsigned threads = 0;
  unsigned cap = kDefaultMaterializationCap;
};

/// Parses arguments after the program name, e.g. {"pmf", "--n", "3", "--p", "2/3"}.
/// Throws UsageError (message includes the reason) on any invalid input.
RunConfig parse_config(const std::vector<std::string>& args, unsigned cap = kDefaultMaterializationCap);

/// Resolves the materialization cap from the environment value (may be null).
/// A set value is echoed as a warning line on `err`; a malformed one throws
/// UsageError.
unsigned resolve_cap(const char* env_value, std::ostream& err);

/// Builds the result table for a validated configuration.
Table build_table(const RunConfig& config);

/// Full front end: returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const char* cap_env);

std::string usage();

}  // namespace weaver::cli
