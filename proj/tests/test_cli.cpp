#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

#ifndef HEIS_CLI_PATH
#error "HEIS_CLI_PATH must point at the built binary"
#endif

struct RunResult {
  int exit_code = 0;
  std::string output;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " " + std::string(HEIS_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    res.output.append(buf.data(), got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("distance anchor prints the scalar") {
  const RunResult r = run("dist --g 2,3,5 --h 0,3,8 --n 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "2\n");
}

TEST_CASE("characteristic projection anchor") {
  const RunResult r = run("project --char --g 1,0,0.75");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("foot 1,-1,0") != std::string::npos);
  CHECK(r.output.find("distance 1.189207") != std::string::npos);
  CHECK(r.output.find("lambda 1") != std::string::npos);
}

TEST_CASE("json outputs re-parse and carry the config echo") {
  for (const std::string args :
       {std::string("dist --g 2,3,5 --h 0,3,8 --format json"),
        std::string("project --char --g 1,0,0.75 --format json"),
        std::string("omegap --p 2 --samples 100000 --format json"),
        std::string("path --quasi-gap --g 1,0,0.01 --lambda1 0.2 "
                    "--format json"),
        std::string("charset --domain slab --params 1 --mesh 24 "
                    "--format json")}) {
    const RunResult r = run(args);
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j.contains("config"));
    CHECK(j.contains("results"));
    CHECK(j.contains("diagnostics"));
  }
}

TEST_CASE("solver run emits CSV and exit code reflects convergence") {
  const RunResult csv = run(
      "solve --domain gauge-ball --params 1 --p 2 --bc linear:1,0 --h 0.2 "
      "--format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.output.rfind("x,y,t,value,kind\n", 0) == 0);
  CHECK(csv.output.find("interior") != std::string::npos);

  const RunResult fail = run(
      "solve --domain gauge-ball --params 1 --p 2 --bc linear:1,0 --h 0.2 "
      "--tol 1e-15 --max-sweeps 2");
  CHECK(fail.exit_code == 2);
}

TEST_CASE("validation failures exit with code 1") {
  CHECK(run("project --char --g 0,0,1").exit_code == 1);
  CHECK(run("dist --g 1,2 --h 0,0,0").exit_code == 1);
  CHECK(run("solve --domain unknown --p 2").exit_code == 1);
  CHECK(run("barrier --g 2,0,0 --r-in 3 --r-out 1 --p 2").exit_code == 1);
}

TEST_CASE("seeded runs are byte-identical and HEIS_SEED wins") {
  const std::string args = "omegap --p 2.5 --samples 120000 --seed 5";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.output == b.output);
  const RunResult c = run(args, "HEIS_SEED=6");
  const RunResult d = run("omegap --p 2.5 --samples 120000 --seed 6");
  CHECK(c.output == d.output);
  CHECK(c.output != a.output);
}

TEST_CASE("decay profile CSV shape") {
  const RunResult r = run(
      "decay --domain slab --params 1 --field linear:1,0 --g0 0,0,0 "
      "--r 0.3 --count 12 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("d_over_r,ratio\n", 0) == 0);
}

TEST_CASE("ring solve accepts a bare barrier data spec") {
  const RunResult r = run(
      "solve --domain gauge-ring --params 0.5,2 --p 2.5 --bc barrier "
      "--h 0.2 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("x,y,t,value,kind\n", 0) == 0);
}

TEST_CASE("solver-backed comparison field tracks the exact one") {
  // The discrete solution with linear data stays within grid error of the
  // linear field, so the normalized spread stays near one.
  const RunResult r = run(
      "compare --domain slab --params 1 --u linear:1,0 --v solve "
      "--bc linear:1,0 --h 0.125 --g0 0,0,0 --r 0.3 --count 16 "
      "--format json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["results"]["spread"].get<double>() < 1.5);
}

TEST_CASE("comparison spread of a field against its double is one") {
  const RunResult r = run(
      "compare --domain slab --params 1 --u linear:1,0 --v linear:2,0 "
      "--g0 0,0,0 --r 0.3 --count 16 --format json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["results"]["spread"].get<double>() == doctest::Approx(1.0));
}
