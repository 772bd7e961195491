#include "weaver/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "weaver/analysis.hpp"
#include "weaver/errors.hpp"
#include "weaver/sampler.hpp"

namespace weaver::cli {
namespace {

constexpr unsigned kMaxDecomposeDepth = 31;  // (2^n - 1)^2 must fit in int64
constexpr unsigned kMaxConvergeDepth = 512;
constexpr unsigned kMaxConvergeSampledDepth = 16;
constexpr unsigned kDefaultGridLevel = 6;

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"pmf", Command::pmf},         {"cdf", Command::cdf},           {"triangle", Command::triangle},
      {"moments", Command::moments}, {"decompose", Command::decompose}, {"sample", Command::sample},
      {"converge", Command::converge}, {"density", Command::density}};
  return names;
}

bool needs_p(Command c) { return c != Command::triangle && c != Command::decompose; }

std::int64_t as_int64(const BigInt& v) {
  if (!v.fits_slong_p()) throw CapacityError("integer does not fit in 64 bits: " + to_string(v));
  return v.get_si();
}

void check_n(const RunConfig& c, unsigned lo, unsigned hi, const char* why) {
  if (c.n < lo || c.n > hi)
    throw UsageError("--n must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] for this command (" +
                     why + "), got " + std::to_string(c.n));
}

Table pmf_table(const RunConfig& c) {
  const WeaverParams params(c.n, *c.p);
  const WeaverDist dist = build_pmf_vector(params, c.cap);
  Table t{{"k", "y", "p"}, {}};
  const auto pmf = dist.pmf();
  for (std::uint64_t k = 0; k < pmf.size(); ++k)
    t.add_row({static_cast<std::int64_t>(k), realization_value(k, c.n), pmf[k]});
  return t;
}

Table cdf_table(const RunConfig& c) {
  const WeaverParams params(c.n, *c.p);
  const unsigned level = c.level == 0 ? c.n : c.level;
  Table t{{"k", "v", "F"}, {}};
  const std::uint64_t points = std::uint64_t{1} << level;
  for (std::uint64_t k = 0; k <= points; ++k) {
    const DyadicPoint point(level, k);
    t.add_row({static_cast<std::int64_t>(k), point.value(), cdf_at_dyadic(point, params)});
  }
  return t;
}

Table triangle_table(const RunConfig& c) {
  Table t{{"row", "k", "exponent"}, {}};
  std::optional<Rational> f;
  if (c.p) {
    f = WeaverParams(1, *c.p).odds();
    t.columns.push_back("weight");
  }
  for (unsigned row = 0; row <= c.n; ++row) {
    const auto exponents = geometric_triangle_row(row, c.cap);
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      std::vector<Table::Cell> cells{static_cast<std::int64_t>(row), static_cast<std::int64_t>(k),
                                     static_cast<std::int64_t>(exponents[k])};
      if (f) cells.emplace_back(pow(*f, exponents[k]));
      t.add_row(std::move(cells));
    }
  }
  return t;
}

Table moments_table(const RunConfig& c) {
  const WeaverParams params(c.n, *c.p);
  Table t{{"quantity", "value"}, {}};
  const MergedStats merged = merged_variable_stats(params, c.cap);
  t.add_row({std::string("mean"), exact_mean(params)});
  t.add_row({std::string("variance"), exact_variance(params)});
  t.add_row({std::string("variance_ratio"), Rational(exact_variance(params) / (params.p() * params.q()))});
  t.add_row({std::string("limit_variance"), limit_variance(params.p())});
  t.add_row({std::string("merged_mean"), merged.mean});
  t.add_row({std::string("merged_variance"), merged.variance});
  t.add_row({std::string("merging_variance"), merging_variance(params)});
  for (unsigned j = 1; j <= c.order; ++j)
    t.add_row({"moment_" + std::to_string(j), exact_moment(params, j, c.cap)});
  return t;
}

Table decompose_table(const RunConfig& c) {
  Table t{{"n", "mersenne", "denom", "weaving", "merging", "weaving_share", "merging_share"}, {}};
  if (c.p) {
    t.columns.push_back("weaving_variance");
    t.columns.push_back("merging_variance");
  }
  const Rational p = c.p.value_or(Rational(1, 2));
  for (unsigned n = 1; n <= c.n; ++n) {
    const DecompositionRow row = variance_decomposition(n, p);
    std::vector<Table::Cell> cells{static_cast<std::int64_t>(n), as_int64(mersenne(n)), as_int64(row.denom),
                                   as_int64(row.weaving), as_int64(row.merging), row.weaving_share,
                                   row.merging_share};
    if (c.p) {
      const Rational bern = p * (1 - p);
      cells.emplace_back(Rational(row.weaving_share * bern));
      cells.emplace_back(Rational(row.merging_share * bern));
    }
    t.add_row(std::move(cells));
  }
  return t;
}

Table sample_table(const RunConfig& c) {
  const auto& [h0, h1] = *c.parents;
  const WeaverParams params(c.n, *c.p);
  if (c.replications >= 100) {
    const MomentReport r = monte_carlo_moments(c.n, h0, h1, params.p(), c.replications, c.seed, c.threads);
    Table t{{"replications", "empirical_mean", "empirical_variance", "exact_mean", "exact_variance",
             "standard_error", "z_score", "variance_standard_error", "variance_z_score"},
            {}};
    t.add_row({static_cast<std::int64_t>(r.replications), r.empirical_mean, r.empirical_variance, r.exact_mean,
               r.exact_variance, r.standard_error, r.z_score, r.variance_standard_error, r.variance_z_score});
    return t;
  }
  Table t{{"replication", "k", "path", "y", "total", "mean"}, {}};
  for (std::uint64_t r = 0; r < c.replications; ++r) {
    RandomStream rng(c.seed, r);
    const SampleRun run = run_exponential_sample(c.n, h0, h1, params.p(), rng);
    std::string bits;
    for (auto b : run.path.bits()) bits += b ? '1' : '0';
    t.add_row({static_cast<std::int64_t>(r), static_cast<std::int64_t>(run.path.k()), bits, run.conditional_mean,
               run.total, run.mean});
  }
  return t;
}

Table converge_table(const RunConfig& c) {
  const Rational p = *c.p;
  Table t{{"n", "variance_ratio", "gap_to_limit"}, {}};
  const unsigned level = c.level == 0 ? kDefaultGridLevel : c.level;
  if (c.parents) t.columns.push_back("ks_distance");
  for (unsigned n = 1; n <= c.n; ++n) {
    const WeaverParams params(n, p);
    const Rational ratio = exact_variance(params) / (params.p() * params.q());
    std::vector<Table::Cell> cells{static_cast<std::int64_t>(n), ratio, to_double(Rational(ratio - Rational(1, 3)))};
    if (c.parents) {
      const auto& [h0, h1] = *c.parents;
      const auto means = simulate_sample_means(n, h0, h1, p, c.replications, c.seed, c.threads);
      cells.emplace_back(dyadic_ks_distance(means, p, level));
    }
    t.add_row(std::move(cells));
  }
  return t;
}

Table density_table(const RunConfig& c) {
  const WeaverParams params(c.n, *c.p);
  Table t{{"k", "lo", "hi", "density", "log2_density"}, {}};
  const std::uint64_t cells = std::uint64_t{1} << c.n;
  for (std::uint64_t k = 0; k < cells; ++k) {
    t.add_row({static_cast<std::int64_t>(k), DyadicPoint(c.n, k).value(), DyadicPoint(c.n, k + 1).value(),
               local_density_exact(k, params), static_cast<double>(c.n) + log2_pmf_point(k, params)});
  }
  return t;
}

}  // namespace

std::string usage() {
  return "usage: weaver <command> --n N [--p P] [options]\n"
         "commands: pmf cdf triangle moments decompose sample converge density\n"
         "  --n N            number of selections (rows 1..N for decompose/converge)\n"
         "  --p P            selection probability in (0,1), as a/b or a decimal\n"
         "  --parents SPEC   'h0;h1', families point:c bernoulli:q[,lo,hi] uniform:a,b gauss:mean,var\n"
         "  --reps R         Monte Carlo replications (default 10000)\n"
         "  --seed S         root seed (default 0)\n"
         "  --level L        dyadic grid depth for cdf / converge\n"
         "  --order J        highest raw moment for moments (default 4)\n"
         "  --threads T      worker threads (0 = all cores)\n"
         "  --format F       csv (default) or json\n"
         "  --output PATH    write to PATH instead of standard output\n";
}

unsigned resolve_cap(const char* env_value, std::ostream& err) {
  if (env_value == nullptr) return kDefaultMaterializationCap;
  const std::string_view text(env_value);
  unsigned cap = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || cap < 1 || cap > kMaxIndexBits)
    throw UsageError(std::string(kCapEnvVar) + " must be an integer in [1, " + std::to_string(kMaxIndexBits) +
                     "], got '" + std::string(text) + "'");
  err << "warning: " << kCapEnvVar << "=" << cap << " overrides the default materialization cap of "
      << kDefaultMaterializationCap << '\n';
  return cap;
}

RunConfig parse_config(const std::vector<std::string>& args, unsigned cap) {
  RunConfig config;
  config.cap = cap;
  if (args.empty()) throw UsageError("missing command");
  const auto found = command_names().find(args.front());
  if (found == command_names().end()) throw UsageError("unknown command '" + args.front() + "'");
  config.command = found->second;

  CLI::App app{"weaver"};
  app.allow_extras(false);
  std::string p_text, parents_text, format_text = "csv";
  app.add_option("--n", config.n)->required();
  app.add_option("--p", p_text);
  app.add_option("--parents", parents_text);
  app.add_option("--reps", config.replications);
  app.add_option("--seed", config.seed);
  app.add_option("--level", config.level);
  app.add_option("--order", config.order);
  app.add_option("--threads", config.threads);
  app.add_option("--format", format_text);
  app.add_option("--output,-o", config.output);

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (format_text == "csv")
    config.format = Format::csv;
  else if (format_text == "json")
    config.format = Format::json;
  else
    throw UsageError("--format must be csv or json, got '" + format_text + "'");

  if (!p_text.empty()) {
    try {
      config.p = parse_rational(p_text);
    } catch (const ParseError& e) {
      throw UsageError(std::string("--p: ") + e.what());
    }
    if (*config.p <= 0 || *config.p >= 1)
      throw UsageError("--p must lie strictly inside (0, 1), got " + to_string(*config.p));
  } else if (needs_p(config.command)) {
    throw UsageError("--p is required for this command");
  }

  if (config.replications < 1) throw UsageError("--reps must be at least 1");

  if (!parents_text.empty()) {
    try {
      auto [h0, h1] = parse_parent_pair(parents_text);
      config.parents = standardize_parents(h0, h1);
    } catch (const std::exception& e) {
      throw UsageError(std::string("--parents: ") + e.what());
    }
  } else if (config.command == Command::sample) {
    config.parents = std::make_pair(ParentDistribution::point_mass(0.0), ParentDistribution::point_mass(1.0));
  }

  switch (config.command) {
    case Command::pmf:
    case Command::density: check_n(config, 1, cap, "materialization cap"); break;
    case Command::triangle: check_n(config, 0, cap, "materialization cap"); break;
    case Command::moments: check_n(config, 1, cap, "moments enumerate every leaf"); break;
    case Command::decompose: check_n(config, 1, kMaxDecomposeDepth, "64-bit integer columns"); break;
    case Command::sample: check_n(config, 1, kMaxDrawDepth, "2^n - 1 draws per run"); break;
    case Command::converge:
      check_n(config, 1, config.parents ? kMaxConvergeSampledDepth : kMaxConvergeDepth,
              config.parents ? "sampled convergence draws 2^n - 1 values per run" : "row limit");
      break;
    case Command::cdf:
      check_n(config, 1, kMaxIndexBits, "leaf index range");
      if (config.level > config.n) throw UsageError("--level must not exceed --n for cdf");
      if ((config.level == 0 ? config.n : config.level) > cap)
        throw UsageError("cdf grid depth exceeds the materialization cap of " + std::to_string(cap));
      break;
  }
  if (config.command == Command::converge && config.level > cap)
    throw UsageError("--level exceeds the materialization cap of " + std::to_string(cap));
  return config;
}

Table build_table(const RunConfig& config) {
  switch (config.command) {
    case Command::pmf: return pmf_table(config);
    case Command::cdf: return cdf_table(config);
    case Command::triangle: return triangle_table(config);
    case Command::moments: return moments_table(config);
    case Command::decompose: return decompose_table(config);
    case Command::sample: return sample_table(config);
    case Command::converge: return converge_table(config);
    case Command::density: return density_table(config);
  }
  throw UsageError("unhandled command");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const char* cap_env) {
  if (std::any_of(args.begin(), args.end(), [](const std::string& a) { return a == "--help" || a == "-h"; })) {
    out << usage();
    return kExitOk;
  }
  RunConfig config;
  try {
    config = parse_config(args, resolve_cap(cap_env, err));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << usage();
    return kExitUsage;
  }
  try {
    return emit_table(build_table(config), config.format, config.output, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace weaver::cli
