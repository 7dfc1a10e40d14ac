// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "harness/stats.hpp"
#include "simkit/manifest.hpp"

namespace rwrs::app {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool operator==(const Table&) const = default;
};

struct RunResult {
  std::string command;
  Table table;
  std::vector<harness::TestReport> tests;
  std::vector<std::pair<std::string, double>> summary;
  bool passed() const noexcept;
  bool operator==(const RunResult&) const = default;
};

// Header row then one line per row; reals as %.17g, '.' decimal separator.
std::string to_csv(const Table& table);

std::string to_json_text(const RunResult& result);
RunResult result_from_json_text(const std::string& text);  // parse_error on malformed input

// Writes results.csv, report.json and manifest.txt into dir (created).
simkit::Manifest write_outputs(const std::filesystem::path& dir, const RunResult& result,
                               const simkit::KeyValues& config, std::uint64_t master_seed,
                               double duration_seconds);

}  // namespace rwrs::app
