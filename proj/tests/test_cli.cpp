// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using fracbranch::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fracbranch_test_" + name);
}

}  // namespace

TEST_CASE("pmf command reproduces the geometric partial sum") {
  const auto r = invoke({"pmf", "--theta", "1", "--beta", "1", "--t", "1", "--n-max", "10"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == std::vector<std::string>{"n", "probability"});
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) sum += std::stod(rows[i][1]);
  CHECK(sum == doctest::Approx(0.98981410596798303894).epsilon(1e-14));
}

TEST_CASE("moments command columns and shape") {
  const auto r = invoke({"moments", "--beta", "0.5", "--b", "1", "--x", "1", "--t-max", "4", "--steps", "100"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"t", "mean", "second_moment", "variance"});
  CHECK(std::stod(rows[1][1]) == 1.0);
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
  CHECK(std::stod(rows[26][1]) == doctest::Approx(0.42758357615580700441).epsilon(1e-12));
}

TEST_CASE("output uses round-trip formatting") {
  const auto r = invoke({"ml-eval", "--beta", "0.5", "--x", "-1"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"beta", "x", "value"});
  CHECK(rows[1][2].size() >= 17);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.42758357615580700441).epsilon(1e-14));
}

TEST_CASE("verify moments with a preset") {
  const auto r = invoke({"verify", "moments", "--preset", "feller-sub", "--seed", "42", "--n-rep", "5000"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"check", "estimate", "target", "std_error", "pass"});
  CHECK(rows[1][0] == "mean");
  CHECK(rows[1][4] == "true");
}

TEST_CASE("validation failures exit 2 and name the flag") {
  auto r = invoke({"moments", "--beta", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--beta") != std::string::npos);
  CHECK(invoke({"moments", "--no-such-flag", "1"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  r = invoke({"verify", "moments", "--preset", "scaling"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--preset") != std::string::npos);
  CHECK(invoke({"simulate", "--offspring", "0:0.5,2:0.6", "--process", "gw"}).code == 2);
}

TEST_CASE("numerical failures exit 3") {
  const auto r = invoke({"pmf", "--beta", "0.5", "--t", "2", "--n-max", "400", "--route", "alternating"});
  CHECK(r.code == 3);
  CHECK(r.err.find("mixture") != std::string::npos);
}

TEST_CASE("unwritable output exits 4") {
  CHECK(invoke({"pmf", "--output", "/nonexistent-dir/out.csv"}).code == 4);
}

TEST_CASE("JSON config mirrors the flags and yields to the command line") {
  const auto config = temp_file("config.json");
  {
    std::ofstream f(config);
    f << R"({"theta": 1, "beta": 0.6, "t": 2, "n-max": 3})";
  }
  const auto from_file = invoke({"pmf", "--config", config.string()});
  const auto from_flags = invoke({"pmf", "--theta", "1", "--beta", "0.6", "--t", "2", "--n-max", "3"});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == from_flags.out);
  const auto overridden = invoke({"pmf", "--config", config.string(), "--t", "1"});
  const auto direct = invoke({"pmf", "--theta", "1", "--beta", "0.6", "--t", "1", "--n-max", "3"});
  CHECK(overridden.out == direct.out);
  {
    std::ofstream f(config);
    f << R"({"beta": {"nested": 1}})";
  }
  CHECK(invoke({"pmf", "--config", config.string()}).code == 2);
  CHECK(invoke({"pmf", "--config", "/nonexistent.json"}).code == 2);
  std::filesystem::remove(config);
}

TEST_CASE("identical configuration gives byte-identical files") {
  const auto a = temp_file("a.csv");
  const auto b = temp_file("b.csv");
  const std::vector<std::string> base = {"simulate", "--process", "feller", "--beta", "0.7", "--n-rep", "5",
                                         "--steps", "10", "--seed", "7"};
  auto with_output = [&](const std::filesystem::path& p) {
    auto args = base;
    args.push_back("--output");
    args.push_back(p.string());
    return args;
  };
  REQUIRE(invoke(with_output(a)).code == 0);
  setenv("FRACBRANCH_THREADS", "1", 1);
  REQUIRE(invoke(with_output(b)).code == 0);
  unsetenv("FRACBRANCH_THREADS");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(a) == slurp(b));
  CHECK(parse_csv(slurp(a)).size() == 1 + 5 * 11);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("simulate a time-changed GWP") {
  const auto r = invoke({"simulate", "--process", "gw", "--offspring", "0:0.3,2:0.7", "--wait", "pareto-norm:0.6",
                         "--j", "5", "--t-max", "10", "--steps", "5", "--n-rep", "3"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows.size() == 1 + 3 * 6);
  CHECK(rows[1][2] == "5");
}
