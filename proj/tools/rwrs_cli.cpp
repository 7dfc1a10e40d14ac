// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: rwrs <subcommand> [--config FILE] [--out DIR] ...
// Exit codes: 0 success, 1 invalid input or runtime error, 2 a test report failed.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rwrs/rwrs.h"

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out = "rwrs-out";
  std::uint64_t seed = 0;
  std::uint64_t replicas = 0;
  bool allow_inadmissible = false;
  bool validate_only = false;
  bool quiet = false;
};

int run(const Options& opt, bool has_seed, bool has_replicas) {
  rwrs_overrides ov{};
  ov.has_seed = has_seed;
  ov.seed = opt.seed;
  ov.has_replicas = has_replicas;
  ov.replicas = opt.replicas;
  ov.allow_inadmissible = opt.allow_inadmissible;

  rwrs_config* cfg = nullptr;
  const rwrs_status st = opt.config.empty()
                             ? rwrs_config_parse_text("", opt.command.c_str(), &ov, &cfg)
                             : rwrs_config_parse_file(opt.config.c_str(), opt.command.c_str(), &ov, &cfg);
  if (st != RWRS_OK) {
    std::cerr << "rwrs: invalid configuration (" << rwrs_status_name(st) << ")\n"
              << rwrs_last_error() << "\n";
    return 1;
  }
  if (opt.validate_only) {
    std::cout << rwrs_config_echo(cfg);
    rwrs_config_destroy(cfg);
    return 0;
  }

  const auto t0 = std::chrono::steady_clock::now();
  rwrs_result* res = nullptr;
  if (rwrs_status rs = rwrs_run(cfg, &res); rs != RWRS_OK) {
    std::cerr << "rwrs: " << opt.command << " failed (" << rwrs_status_name(rs) << "): "
              << rwrs_last_error() << "\n";
    rwrs_config_destroy(cfg);
    return 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int code = rwrs_result_passed(res) ? 0 : 2;
  if (rwrs_result_write(res, cfg, opt.out.c_str(), secs) != RWRS_OK) {
    std::cerr << "rwrs: " << rwrs_last_error() << "\n";
    code = 1;
  } else if (!opt.quiet) {
    std::cout << rwrs_result_json(res);
  }
  if (code == 2) std::cerr << "rwrs: at least one test report failed; see " << opt.out << "/report.json\n";
  rwrs_result_destroy(res);
  rwrs_config_destroy(cfg);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk in random scenery: simulation and checks"};
  Options opt;
  std::vector<std::string> names;
  for (size_t i = 0; const char* s = rwrs_subcommand(i); ++i) names.emplace_back(s);

  app.add_option("subcommand", opt.command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--config", opt.config, "INI configuration file")->check(CLI::ExistingFile);
  auto* seed = app.add_option("--seed", opt.seed, "Master seed (overrides the file)");
  app.add_option("--out", opt.out, "Output directory")->capture_default_str();
  auto* reps = app.add_option("--replicas", opt.replicas, "Replica count (overrides the file)");
  app.add_flag("--allow-inadmissible", opt.allow_inadmissible,
               "Permit times off d0 Z; their estimates must be exactly 0");
  app.add_flag("--validate-only", opt.validate_only, "Print the resolved configuration and exit");
  app.add_flag("-q,--quiet", opt.quiet, "Do not print the report");
  app.footer("RWRS_THREADS caps the worker count.  Exit 0 ok, 1 error, 2 failed test report.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int c = app.exit(e);
    return c == 0 ? 0 : 1;
  }
  return run(opt, seed->count() > 0, reps->count() > 0);
}
