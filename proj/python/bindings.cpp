#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "weaver/analysis.hpp"
#include "weaver/cli.hpp"
#include "weaver/errors.hpp"
#include "weaver/sampler.hpp"

namespace py = pybind11;
using namespace weaver;

namespace {

// Anything fractions.Fraction accepts: int, str ("2/3", "0.25"), Fraction, float.
Rational to_rational(const py::handle& value) {
  static const py::object fraction = py::module_::import("fractions").attr("Fraction");
  return parse_rational(py::str(fraction(value)).cast<std::string>());
}

py::object to_py(const Rational& r) {
  static const py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_string(r));
}

py::object to_py(const BigInt& z) { return py::int_(py::str(to_string(z))); }

py::list to_py(std::span<const Rational> values) {
  py::list out;
  for (const auto& v : values) out.append(to_py(v));
  return out;
}

WeaverParams params(unsigned n, const py::handle& p) { return WeaverParams(n, to_rational(p)); }

std::pair<ParentDistribution, ParentDistribution> parents(const std::string& spec) {
  const auto [h0, h1] = parse_parent_pair(spec);
  return standardize_parents(h0, h1);
}

py::dict report_dict(const MomentReport& r) {
  py::dict d;
  d["replications"] = r.replications;
  d["empirical_mean"] = r.empirical_mean;
  d["empirical_variance"] = r.empirical_variance;
  d["exact_mean"] = to_py(r.exact_mean);
  d["exact_variance"] = r.exact_variance;
  d["standard_error"] = r.standard_error;
  d["z_score"] = r.z_score;
  d["variance_standard_error"] = r.variance_standard_error;
  d["variance_z_score"] = r.variance_z_score;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact weaver distributions, exponential sampling and analysis";

  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<RefinementError>(m, "RefinementError", PyExc_ValueError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.attr("DEFAULT_MATERIALIZATION_CAP") = kDefaultMaterializationCap;

  m.def("realization_value", [](std::uint64_t k, unsigned n) { return to_py(realization_value(k, n)); },
        py::arg("k"), py::arg("n"));
  m.def(
      "pmf",
      [](unsigned n, const py::object& p, unsigned cap) {
        const WeaverDist dist = build_pmf_vector(params(n, p), cap);
        return to_py(dist.pmf());
      },
      py::arg("n"), py::arg("p"), py::arg("cap") = kDefaultMaterializationCap);
  m.def(
      "pmf_point", [](std::uint64_t k, unsigned n, const py::object& p) { return to_py(pmf_point(k, params(n, p))); },
      py::arg("k"), py::arg("n"), py::arg("p"));
  m.def(
      "cdf_at_dyadic",
      [](unsigned m_, std::uint64_t k, unsigned n, const py::object& p) {
        return to_py(cdf_at_dyadic(DyadicPoint(m_, k), params(n, p)));
      },
      py::arg("m"), py::arg("k"), py::arg("n"), py::arg("p"), "F(k / 2^m) for W(n, p).");
  m.def("geometric_triangle_row", &geometric_triangle_row, py::arg("n"),
        py::arg("cap") = kDefaultMaterializationCap);
  m.def("exponent_sum", [](unsigned n) { return to_py(exponent_sum(n)); }, py::arg("n"));
  m.def(
      "jump_spectrum",
      [](unsigned n, const py::object& p) {
        py::list out;
        for (const auto& j : jump_spectrum(params(n, p))) out.append(py::make_tuple(to_py(j.height), to_py(j.multiplicity)));
        return out;
      },
      py::arg("n"), py::arg("p"));
  m.def("mirror_index", &mirror_index, py::arg("k"), py::arg("n"));

  m.def("exact_mean", [](unsigned n, const py::object& p) { return to_py(exact_mean(params(n, p))); },
        py::arg("n"), py::arg("p"));
  m.def("exact_variance", [](unsigned n, const py::object& p) { return to_py(exact_variance(params(n, p))); },
        py::arg("n"), py::arg("p"));
  m.def(
      "exact_moment",
      [](unsigned n, const py::object& p, unsigned j) { return to_py(exact_moment(params(n, p), j)); },
      py::arg("n"), py::arg("p"), py::arg("j"));
  m.def("limit_variance", [](const py::object& p) { return to_py(limit_variance(to_rational(p))); }, py::arg("p"));
  m.def("merging_variance", [](unsigned n, const py::object& p) { return to_py(merging_variance(params(n, p))); },
        py::arg("n"), py::arg("p"));
  m.def(
      "variance_decomposition",
      [](unsigned n, const py::object& p) {
        const DecompositionRow row = variance_decomposition(n, to_rational(p));
        py::dict d;
        d["n"] = row.n;
        d["denom"] = to_py(row.denom);
        d["weaving"] = to_py(row.weaving);
        d["merging"] = to_py(row.merging);
        d["weaving_share"] = to_py(row.weaving_share);
        d["merging_share"] = to_py(row.merging_share);
        return d;
      },
      py::arg("n"), py::arg("p") = py::str("1/2"));
  m.def("local_density", [](std::uint64_t k, unsigned n, const py::object& p) { return local_density(k, params(n, p)); },
        py::arg("k"), py::arg("n"), py::arg("p"));
  m.def(
      "roughness_report",
      [](const py::object& p, unsigned level) {
        const RoughnessReport r = roughness_report(to_rational(p), level);
        py::dict d;
        d["p"] = to_py(r.p);
        d["f"] = to_py(r.f);
        d["level"] = r.level;
        d["ratio"] = to_py(r.ratio_exact);
        d["fractal_dimension"] = r.fractal_dimension;
        d["log2_left_factor"] = r.log2_left_factor;
        d["log2_right_factor"] = r.log2_right_factor;
        return d;
      },
      py::arg("p"), py::arg("level"));
  m.def(
      "pmodel_cell_masses",
      [](unsigned n, const py::object& p) { return to_py(std::span<const Rational>(pmodel_cell_masses(n, to_rational(p)))); },
      py::arg("n"), py::arg("p"));

  m.def(
      "sample_mean_variance",
      [](unsigned n, const py::object& p, double var0, double var1) {
        return sample_mean_variance(params(n, p), var0, var1);
      },
      py::arg("n"), py::arg("p"), py::arg("var0"), py::arg("var1"));
  m.def(
      "simulate_sample_means",
      [](unsigned n, const py::object& p, std::uint64_t replications, std::uint64_t seed, const std::string& spec,
         unsigned threads) {
        const auto [h0, h1] = parents(spec);
        const Rational pr = to_rational(p);
        py::gil_scoped_release release;
        return simulate_sample_means(n, h0, h1, pr, replications, seed, threads);
      },
      py::arg("n"), py::arg("p"), py::arg("replications"), py::arg("seed") = 0,
      py::arg("parents") = "point:0;point:1", py::arg("threads") = 0,
      "Sample means of independent runs; parents are standardized first.");
  m.def(
      "monte_carlo_moments",
      [](unsigned n, const py::object& p, std::uint64_t replications, std::uint64_t seed, const std::string& spec,
         unsigned threads) {
        const auto [h0, h1] = parents(spec);
        const Rational pr = to_rational(p);
        MomentReport r;
        {
          py::gil_scoped_release release;
          r = monte_carlo_moments(n, h0, h1, pr, replications, seed, threads);
        }
        return report_dict(r);
      },
      py::arg("n"), py::arg("p"), py::arg("replications"), py::arg("seed") = 0,
      py::arg("parents") = "point:0;point:1", py::arg("threads") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, std::optional<std::string> cap) {
        std::ostringstream out, err;
        const int status = cli::run(args, out, err, cap ? cap->c_str() : nullptr);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), py::arg("cap") = py::none(),
      "Runs a command line (without the program name); returns (status, stdout, stderr).");
}
