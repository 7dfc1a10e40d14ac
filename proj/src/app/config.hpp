// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lattice_walk/walk.hpp"
#include "scenery/law.hpp"
#include "simkit/manifest.hpp"

namespace rwrs::app {

// The twelve subcommands, in documentation order.
const std::vector<std::string>& subcommands();

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicas;
  bool allow_inadmissible = false;
};

/*!
 * Fully resolved experiment: every key of the subcommand's schema has a
 * value (defaults filled), cross-field constraints hold, and the derived law
 * constants are recorded under "derived.*".
 */
class ExperimentConfig {
 public:
  const std::string& command() const noexcept { return command_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replicas() const noexcept { return replicas_; }
  bool allow_inadmissible() const noexcept { return allow_inadmissible_; }

  // "section.key" -> canonical text, in echo order.
  const simkit::KeyValues& resolved() const noexcept { return resolved_; }

  bool has(const std::string& key) const;  // keys are "params.x" or "tuning.x"
  const std::string& text(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<std::uint64_t> u64s(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  const lattice::StepLaw& step_law() const { return *step_; }
  const scenery::SceneryLaw& scenery_law() const { return *scen_; }

 private:
  friend struct ConfigBuilder;
  std::string command_;
  std::uint64_t seed_ = 1;
  std::uint64_t replicas_ = 1;
  bool allow_inadmissible_ = false;
  simkit::KeyValues resolved_;
  std::optional<lattice::StepLaw> step_;
  std::optional<scenery::SceneryLaw> scen_;
};

struct Validation {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // each names the field and the constraint
  bool ok() const noexcept { return config.has_value(); }
};

// command may be empty when the file names it in [experiment] command.
Validation validate_config_text(const std::string& ini, const std::string& command,
                                const Overrides& overrides = {});
Validation validate_config(const std::filesystem::path& path, const std::string& command,
                           const Overrides& overrides = {});

// Resolved configuration as INI text, derived constants included.
std::string echo_config(const ExperimentConfig& config);

}  // namespace rwrs::app
