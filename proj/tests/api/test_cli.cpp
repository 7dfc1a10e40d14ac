// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("rwrs_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// Runs the CLI with stdout and stderr captured into dir; returns the exit code.
int cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = std::string(RWRS_CLI_PATH) + " " + args + " >" +
                          (dir / "stdout.txt").string() + " 2>" + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("return-curve: exit 0, one row per n, byte-identical reruns") {
  const auto d = scratch("rc");
  put(d / "rc.ini", "[experiment]\nseed = 5\nreplicas = 400\n[params]\nn = 32, 64, 128, 256\n"
                    "expect_slope = -0.75\nslope_tol = 0.1\n");
  const auto cfg = (d / "rc.ini").string();
  REQUIRE(cli(d, "return-curve --config " + cfg + " --out " + (d / "a").string()) == 0);
  REQUIRE(cli(d, "return-curve --config " + cfg + " --out " + (d / "b").string() + " -q") == 0);
  const auto a = slurp(d / "a" / "results.csv");
  CHECK(a == slurp(d / "b" / "results.csv"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 5);
  CHECK(slurp(d / "a" / "report.json") == slurp(d / "b" / "report.json"));
  const auto manifest = slurp(d / "a" / "manifest.txt");
  CHECK(manifest.find("results.csv=") != std::string::npos);
  CHECK(manifest.find("experiment.seed=5") != std::string::npos);

  REQUIRE(cli(d, "return-curve --config " + cfg + " --seed 6 --out " + (d / "c").string()) == 0);
  CHECK(a != slurp(d / "c" / "results.csv"));
}

TEST_CASE("validation failures exit 1 and name the problem") {
  const auto d = scratch("bad");
  put(d / "odd.ini", "[params]\nn = 2, 3\n");
  CHECK(cli(d, "return-curve --config " + (d / "odd.ini").string()) == 1);
  CHECK(slurp(d / "stderr.txt").find("multiple of d0 = 2") != std::string::npos);
  CHECK(cli(d, "return-curve --allow-inadmissible --replicas 50 --config " + (d / "odd.ini").string() +
                   " --out " + (d / "o").string()) == 0);

  put(d / "key.ini", "[params]\nn = 2\nwidth = 3\n");
  CHECK(cli(d, "return-curve --config " + (d / "key.ini").string()) == 1);
  CHECK(slurp(d / "stderr.txt").find("unknown key params.width") != std::string::npos);

  CHECK(cli(d, "no-such-command") == 1);
  CHECK(cli(d, "gram --config " + (d / "missing.ini").string()) == 1);
}

TEST_CASE("validate-only echoes derived constants") {
  const auto d = scratch("echo");
  REQUIRE(cli(d, "analyze-law --validate-only") == 0);
  const auto out = slurp(d / "stdout.txt");
  CHECK(out.find("[derived]\nsigma2 = 1\nd = 2\nd0 = 2\n") != std::string::npos);
}

TEST_CASE("gram at the minimum fineness fails its KS report: exit 2") {
  const auto d = scratch("gram");
  put(d / "g.ini", "[experiment]\nreplicas = 10000\n[params]\nfineness = 1000\n");
  REQUIRE(cli(d, "gram --config " + (d / "g.ini").string() + " --out " + (d / "o").string()) == 2);
  const auto report = slurp(d / "o" / "report.json");
  CHECK(report.find("\"pass\": false") != std::string::npos);
  CHECK(fs::exists(d / "o" / "manifest.txt"));
}
