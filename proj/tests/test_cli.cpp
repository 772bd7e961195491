#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "weaver/analysis.hpp"
#include "weaver/cli.hpp"
#include "weaver/errors.hpp"

using namespace weaver;
using namespace weaver::cli;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args, const char* cap_env = nullptr) {
  std::ostringstream out, err;
  const int status = run(args, out, err, cap_env);
  return {status, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

TEST_CASE("parse_config examples") {
  const RunConfig pmf = parse_config({"pmf", "--n", "3", "--p", "2/3"});
  CHECK(pmf.command == Command::pmf);
  CHECK(pmf.n == 3);
  CHECK(*pmf.p == Rational(2, 3));
  CHECK(pmf.format == Format::csv);
  CHECK(pmf.output.empty());

  const RunConfig mc =
      parse_config({"sample", "--n", "10", "--p", "0.5", "--parents", "gauss:0,1;gauss:1,1", "--reps", "10000", "--seed", "7"});
  CHECK(mc.command == Command::sample);
  CHECK(mc.n == 10);
  CHECK(*mc.p == Rational(1, 2));
  CHECK(mc.replications == 10000);
  CHECK(mc.seed == 7);
  REQUIRE(mc.parents);
  CHECK(mc.parents->first.mean() == 0.0);
  CHECK(mc.parents->second.variance() == 1.0);

  CHECK_THROWS_AS(parse_config({"pmf", "--n", "3", "--p", "1"}), UsageError);
}

TEST_CASE("decimal p converts exactly") {
  CHECK(*parse_config({"pmf", "--n", "2", "--p", "0.1"}).p == Rational(1, 10));
  CHECK(*parse_config({"pmf", "--n", "2", "--p", "2.5e-1"}).p == Rational(1, 4));
}

TEST_CASE("usage errors") {
  const std::vector<std::vector<std::string>> bad{
      {},
      {"histogram", "--n", "3", "--p", "1/2"},
      {"pmf", "--n", "3", "--p", "1/2", "--bogus", "1"},
      {"pmf", "--n", "3", "--p", "two"},
      {"pmf", "--n", "3", "--p", "0"},
      {"pmf", "--n", "3"},
      {"pmf", "--p", "1/2"},
      {"pmf", "--n", "0", "--p", "1/2"},
      {"pmf", "--n", "25", "--p", "1/2"},
      {"sample", "--n", "31", "--p", "1/2"},
      {"sample", "--n", "3", "--p", "1/2", "--reps", "0"},
      {"sample", "--n", "3", "--p", "1/2", "--parents", "gauss:0,1"},
      {"sample", "--n", "3", "--p", "1/2", "--parents", "gauss:1,1;uniform:0,2"},
      {"cdf", "--n", "3", "--p", "1/2", "--level", "4"},
      {"pmf", "--n", "3", "--p", "1/2", "--format", "xml"},
      {"decompose", "--n", "32"},
  };
  for (const auto& args : bad) {
    CAPTURE(args.size());
    CHECK_THROWS_AS(parse_config(args), UsageError);
    const Outcome o = invoke(args);
    CHECK(o.status == kExitUsage);
    CHECK(o.out.empty());
    CHECK(o.err.find("error:") != std::string::npos);
  }
  CHECK(invoke({"pmf", "--help"}).status == kExitOk);
}

TEST_CASE("pmf CSV for W(3, 2/3)") {
  const Outcome o = invoke({"pmf", "--n", "3", "--p", "2/3"});
  REQUIRE(o.status == kExitOk);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"k", "y_exact", "y_approx", "p_exact", "p_approx"});
  const std::vector<std::string> expected{"1/27", "2/27", "2/27", "4/27", "2/27", "4/27", "4/27", "8/27"};
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(rows[k + 1][0] == std::to_string(k));
    CHECK(rows[k + 1][3] == expected[k]);
    CHECK(parse_rational(rows[k + 1][1]) == realization_value(k, 3));
  }
  CHECK(rows[8][3] == "8/27");
}

TEST_CASE("JSON carries exact and approx fields") {
  const Outcome o = invoke({"pmf", "--n", "3", "--p", "2/3", "--format", "json"});
  REQUIRE(o.status == kExitOk);
  const auto doc = nlohmann::json::parse(o.out);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 8);
  CHECK(doc[7]["k"] == 7);
  CHECK(doc[7]["p"]["exact"] == "8/27");
  CHECK(doc[7]["p"]["approx"].get<double>() == doctest::Approx(8.0 / 27.0));
  CHECK(doc[3]["y"]["exact"] == "3/7");
}

TEST_CASE("decompose reproduces the weaving/merging table") {
  const Outcome o = invoke({"decompose", "--n", "6"});
  REQUIRE(o.status == kExitOk);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 7);
  const auto& h = rows[0];
  const std::vector<std::string> denom{"1", "9", "49", "225", "961", "3969"};
  const std::vector<std::string> weaving{"1", "5", "21", "85", "341", "1365"};
  const std::vector<std::string> merging{"0", "4", "28", "140", "620", "2604"};
  const std::vector<double> share{1.0, 0.56, 0.43, 0.38, 0.35, 0.34};
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& row = rows[i + 1];
    CHECK(row[column(h, "denom")] == denom[i]);
    CHECK(row[column(h, "weaving")] == weaving[i]);
    CHECK(row[column(h, "merging")] == merging[i]);
    CHECK(std::abs(std::stod(row[column(h, "weaving_share_approx")]) - share[i]) < 0.006);
  }
}

TEST_CASE("converge ratio decreases toward 1/3") {
  const Outcome o = invoke({"converge", "--n", "40", "--p", "2/3", "--format", "json"});
  REQUIRE(o.status == kExitOk);
  const auto doc = nlohmann::json::parse(o.out);
  REQUIRE(doc.size() == 40);
  Rational previous(2);
  for (const auto& row : doc) {
    const Rational ratio = parse_rational(row["variance_ratio"]["exact"].get<std::string>());
    const unsigned n = row["n"].get<unsigned>();
    CHECK(ratio == exact_variance(WeaverParams(n, Rational(2, 3))) / Rational(2, 9));
    CHECK(ratio < previous);
    CHECK(ratio > Rational(1, 3));
    previous = ratio;
  }
  CHECK(to_double(previous - Rational(1, 3)) < 1e-12);
}

TEST_CASE("every command emits re-parseable exact strings") {
  const std::vector<std::vector<std::string>> commands{
      {"pmf", "--n", "4", "--p", "3/7"},
      {"cdf", "--n", "5", "--p", "2/3", "--level", "3"},
      {"triangle", "--n", "4", "--p", "1/3"},
      {"moments", "--n", "6", "--p", "0.3"},
      {"decompose", "--n", "8", "--p", "1/3"},
      {"sample", "--n", "5", "--p", "2/3", "--reps", "10", "--seed", "3"},
      {"sample", "--n", "5", "--p", "2/3", "--reps", "200", "--seed", "3"},
      {"converge", "--n", "5", "--p", "2/3", "--parents", "point:0;point:1", "--reps", "100"},
      {"density", "--n", "4", "--p", "2/3"},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    const Outcome o = invoke(args);
    REQUIRE(o.status == kExitOk);
    const auto rows = parse_csv(o.out);
    REQUIRE(rows.size() >= 2);
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      const std::string& name = rows[0][c];
      if (name.size() < 6 || name.substr(name.size() - 6) != "_exact") continue;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const Rational value = parse_rational(rows[r][c]);
        CHECK(to_string(value) == rows[r][c]);
        CHECK(std::stod(rows[r][c + 1]) == doctest::Approx(to_double(value)).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("cdf command matches the closed-form anchors") {
  const Outcome o = invoke({"cdf", "--n", "3", "--p", "1/3", "--level", "2"});
  REQUIRE(o.status == kExitOk);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][3] == "0");
  CHECK(rows[2][3] == "4/9");
  CHECK(rows[3][3] == "2/3");
  CHECK(rows[4][3] == "8/9");
  CHECK(rows[5][3] == "1");
}

TEST_CASE("identical configuration gives byte-identical output") {
  const std::vector<std::string> args{"sample", "--n", "8", "--p", "2/3", "--parents", "gauss:0,1;gauss:1,1",
                                      "--reps", "500", "--seed", "11"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  REQUIRE(a.status == kExitOk);
  CHECK(a.out == b.out);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(invoke(threaded).out == a.out);
  std::vector<std::string> reseeded = args;
  reseeded[10] = "12";
  CHECK(invoke(reseeded).out != a.out);
}

TEST_CASE("output files") {
  const auto dir = std::filesystem::temp_directory_path() / "weaver_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "pmf.json").string();
  const Outcome o = invoke({"pmf", "--n", "3", "--p", "2/3", "--format", "json", "--output", path});
  CHECK(o.status == kExitOk);
  CHECK(o.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == invoke({"pmf", "--n", "3", "--p", "2/3", "--format", "json"}).out);
  std::filesystem::remove_all(dir);

  const Outcome bad = invoke({"pmf", "--n", "3", "--p", "2/3", "-o", "/nonexistent-dir/x/out.csv"});
  CHECK(bad.status == kExitRuntime);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("materialization cap from the environment") {
  std::ostringstream err;
  CHECK(resolve_cap(nullptr, err) == kDefaultMaterializationCap);
  CHECK(err.str().empty());
  CHECK(resolve_cap("10", err) == 10);
  CHECK(err.str().find("warning") != std::string::npos);
  CHECK(err.str().find(kCapEnvVar) != std::string::npos);
  for (const char* bad : {"", "abc", "0", "64", "12x", "-3"}) CHECK_THROWS_AS(resolve_cap(bad, err), UsageError);

  const Outcome capped = invoke({"pmf", "--n", "11", "--p", "1/2"}, "10");
  CHECK(capped.status == kExitUsage);
  CHECK(capped.err.find("warning") != std::string::npos);
  CHECK(invoke({"pmf", "--n", "10", "--p", "1/2"}, "10").status == kExitOk);
  CHECK(invoke({"pmf", "--n", "3", "--p", "1/2"}, "ten").status == kExitUsage);
}

TEST_CASE("emit_table rejects an empty table") {
  std::ostringstream out, err;
  CHECK_THROWS_AS(write_table(Table{{"a"}, {}}, Format::csv, out), RangeError);
}
