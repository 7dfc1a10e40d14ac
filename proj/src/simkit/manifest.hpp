// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rwrs::simkit {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct Manifest {
  std::string version;
  std::uint64_t master_seed = 0;
  double duration_seconds = 0.0;
  KeyValues config;   // flattened "section.key" -> value, in insertion order
  KeyValues outputs;  // file name -> hex SHA-256

  bool operator==(const Manifest&) const = default;
};

std::string artifact_version();

// Hex SHA-256 of a file's bytes.  io_error if unreadable.
std::string sha256_file(const std::filesystem::path& file);

std::string serialize_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& text);

// Digests each output (relative to dir) and writes dir/manifest.txt.
Manifest write_manifest(const std::filesystem::path& dir, const KeyValues& config,
                        std::uint64_t master_seed, double duration_seconds,
                        const std::vector<std::string>& output_files);

}  // namespace rwrs::simkit
