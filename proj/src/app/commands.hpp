// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "app/config.hpp"
#include "app/result.hpp"

namespace rwrs::app {

// Runs the configured subcommand.  Statistical failures are reported through
// RunResult::tests; invalid input or numerical trouble throws rwrs::Error.
RunResult run_command(const ExperimentConfig& config);

}  // namespace rwrs::app
