#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli.hpp"

#include "json.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "lcg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lcg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) {
  return (std::filesystem::path(LCG_SOURCE_DIR) / "tests" / "data" / name).string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("component") {
  CHECK(run({"component", "--ideal", "x1,x2", "--i", "2", "--a", " -1,-1"}).out == "1\n");
  CHECK(run({"component", "--ideal", "x1,x2", "--i", "2", "--a=-1,-1"}).out == "1\n");
  CHECK(run({"component", "--ideal", "x1", "--i", "0", "--a", "5"}).out == "0\n");
  CHECK(run({"component", "--ideal", "x1,x2", "--i", "2", "--a", " -2,-3"}).out == "1\n");
  CHECK(run({"component", "--ideal", "x1,x2", "--i", "2", "--a", " -2,0"}).out == "0\n");
  CHECK(run({"component", "--ideal", "x1*x2", "--i", "1", "--a", " -1,-1"}).out == "1\n");
  CHECK(run({"component", "--ideal", "", "--i", "0", "--a", "1"}).code == 2);
  CHECK(run({"component", "--ideal", "x1", "--i", "0", "--a", "1,2"}).code == 2);
  CHECK(run({"component", "--ideal", "x1", "--i", "7", "--a", "1"}).code == 2);
  CHECK(run({"component", "--ideal", "x1*", "--i", "0", "--a", "1"}).code == 2);
  CHECK(run({"component", "--ideal", "x1", "--i", "0", "--a", "z"}).code == 2);
  CHECK(run({"component", "--ideal", "x1", "--i", "1", "--m", "2", "--a", " -1,3"}).out == "1\n");
}

TEST_CASE("table of the top local cohomology") {
  const Outcome r = run({"table", "--ideal", "x1,x2", "--i", "2", "--window", " -6:3", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "degree,status,witness,witness_dim,dim");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const int n = -6 + static_cast<int>(k) - 1;
    INFO(lines[k]);
    if (n <= -2) {
      CHECK(lines[k].find(",NONZERO,") != std::string::npos);
      CHECK(lines[k].substr(lines[k].rfind(',') + 1) == std::to_string(-n - 1));
    } else {
      CHECK(lines[k].find(",ZERO_CERTIFIED,") != std::string::npos);
    }
  }
}

TEST_CASE("table in one variable, json") {
  const Outcome r = run({"table", "--ideal", "x1", "--i", "1", "--window", " -3:3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["m"] == 1);
  CHECK(doc["box_complete"] == true);
  for (const auto& row : doc["rows"]) {
    const int n = row["degree"];
    CHECK(row["status"] == (n <= -1 ? "NONZERO" : "ZERO_CERTIFIED"));
    CHECK(row["dim"] == (n <= -1 ? 1 : 0));
  }
}

TEST_CASE("table text layout and errors") {
  const Outcome r = run({"table", "--ideal", "x1", "--i", "1", "--window", "0:1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ZERO_CERTIFIED") != std::string::npos);
  CHECK(run({"table", "--ideal", "x1", "--i", "1", "--window", "3:1"}).code == 2);
  CHECK(run({"table", "--ideal", "x1", "--i", "1", "--window", "3"}).code == 2);
  CHECK(run({"table", "--ideal", "x1", "--i", "1", "--window", "0:1", "--format", "xml"}).code == 2);
  CHECK(run({"table", "--ideal", "x1", "--i", "1", "--window", "0:1", "--box", "0"}).code == 2);
  CHECK(run({"table", "--ideal", "x1", "--i", "1"}).code == 2);
}

TEST_CASE("module json") {
  const Outcome r = run({"module", "--ideal", "x1,x2", "--i", "2", "--window", " -4:-2"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema"] == "lcg.window-module/1");
  CHECK(doc["components"].size() == 3);
}

TEST_CASE("verify") {
  SUBCASE("passing suite, both formats") {
    const Outcome t = run({"verify", data("small_suite.json")});
    CHECK(t.code == 0);
    CHECK(lines_of(t.out).back().rfind("all checks passed", 0) == 0);
    const Outcome j = run({"verify", data("small_suite.json"), "--format", "json", "--threads", "2"});
    CHECK(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["format"] == "lcg-verification-report");
    CHECK(doc["summary"]["failed"] == 0);
    CHECK(j.out.find("seconds") == std::string::npos);
  }
  SUBCASE("output is byte-identical across runs") {
    CHECK(run({"verify", data("small_suite.json"), "--format", "json"}).out ==
          run({"verify", data("small_suite.json"), "--format", "json", "--threads", "1"}).out);
  }
  SUBCASE("counterexample fails") {
    const Outcome r = run({"verify", data("counterexample_suite.json")});
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
  }
  SUBCASE("timings are opt-in") {
    const Outcome r = run({"verify", data("small_suite.json"), "--format", "json", "--timings"});
    CHECK(r.out.find("seconds") != std::string::npos);
  }
  SUBCASE("unreadable or malformed suites") {
    CHECK(run({"verify", data("no_such_suite.json")}).code == 2);
    CHECK(run({"verify", data("counterexample.json")}).code == 2);
    CHECK(run({"verify"}).code == 2);
  }
}

TEST_CASE("weyl") {
  CHECK(run({"weyl", "d1*x1"}).out == "x1*d1 + 1\n");
  CHECK(run({"weyl", "--fourier", "x1"}).out == "d1\n");
  CHECK(run({"weyl", "x1*x1"}).out == "x1^2\n");
  CHECK(run({"weyl", "--inverse-fourier", "--fourier", "x1*d2 + 1/2"}).out == run({"weyl", "x1*d2 + 1/2"}).out);
  CHECK(run({"weyl", "x1 +"}).code == 2);
  CHECK(run({"weyl", "y1"}).code == 2);
}

TEST_CASE("usage") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  const Outcome help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}
