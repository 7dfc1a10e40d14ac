// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "app/result.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include "json.hpp"

#include "simkit/error.hpp"

namespace rwrs::app {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Non-finite reals travel as strings so the JSON stays standard.
json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  fail(ErrorCode::parse_error, "not a real number: " + s);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) fail(ErrorCode::io_error, "cannot write " + p.string());
}

}  // namespace

bool RunResult::passed() const noexcept {
  for (const auto& t : tests)
    if (!t.pass) return false;
  return true;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out += (i ? "," : "") + csv_field(table.columns[i]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (const auto* d = std::get_if<double>(&row[i])) out += fmt(*d);
      else out += csv_field(std::get<std::string>(row[i]));
    }
    out += "\n";
  }
  return out;
}

std::string to_json_text(const RunResult& r) {
  json j;
  j["command"] = r.command;
  j["columns"] = r.table.columns;
  json rows = json::array();
  for (const auto& row : r.table.rows) {
    json jr = json::array();
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c)) jr.push_back({{"real", real_to_json(*d)}});
      else jr.push_back({{"text", std::get<std::string>(c)}});
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  json tests = json::array();
  for (const auto& t : r.tests)
    tests.push_back({{"name", t.name},
                     {"statistic", t.statistic},
                     {"value", real_to_json(t.value)},
                     {"n1", t.n1},
                     {"n2", t.n2},
                     {"threshold", real_to_json(t.threshold)},
                     {"pass", t.pass}});
  j["tests"] = std::move(tests);
  json summary = json::array();
  for (const auto& [k, v] : r.summary) summary.push_back({{"name", k}, {"value", real_to_json(v)}});
  j["summary"] = std::move(summary);
  j["passed"] = r.passed();
  return j.dump(2) + "\n";
}

RunResult result_from_json_text(const std::string& text) {
  try {
    const auto j = json::parse(text);
    RunResult r;
    r.command = j.at("command").get<std::string>();
    r.table.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : jr) {
        if (c.contains("real")) row.emplace_back(real_from_json(c.at("real")));
        else row.emplace_back(c.at("text").get<std::string>());
      }
      r.table.rows.push_back(std::move(row));
    }
    for (const auto& t : j.at("tests"))
      r.tests.push_back({t.at("name").get<std::string>(), t.at("statistic").get<std::string>(),
                         real_from_json(t.at("value")), t.at("n1").get<std::uint64_t>(),
                         t.at("n2").get<std::uint64_t>(), real_from_json(t.at("threshold")),
                         t.at("pass").get<bool>()});
    for (const auto& s : j.at("summary"))
      r.summary.emplace_back(s.at("name").get<std::string>(), real_from_json(s.at("value")));
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
  }
}

simkit::Manifest write_outputs(const std::filesystem::path& dir, const RunResult& result,
                               const simkit::KeyValues& config, std::uint64_t master_seed,
                               double duration_seconds) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "results.csv", to_csv(result.table));
  write_file(dir / "report.json", to_json_text(result));
  return simkit::write_manifest(dir, config, master_seed, duration_seconds,
                                {"results.csv", "report.json"});
}

}  // namespace rwrs::app
