// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "simkit/manifest.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "simkit/error.hpp"

namespace rwrs::simkit {

namespace pt = boost::property_tree;

std::string artifact_version() { return "rwrs-lab 1.0.0"; }

std::string sha256_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot read " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  hex.reserve(2 * len);
  static const char* digits = "0123456789abcdef";
  for (unsigned i = 0; i < len; ++i) {
    hex.push_back(digits[md[i] >> 4]);
    hex.push_back(digits[md[i] & 15]);
  }
  return hex;
}

namespace {

// Keys may contain '.', so children are appended without path parsing.
void append(pt::ptree& sec, const std::string& key, const std::string& value) {
  sec.push_back({key, pt::ptree(value)});
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string serialize_manifest(const Manifest& m) {
  pt::ptree root, head, cfg, outs;
  append(head, "version", m.version);
  append(head, "master_seed", std::to_string(m.master_seed));
  append(head, "duration_seconds", fmt_double(m.duration_seconds));
  for (const auto& [k, v] : m.config) append(cfg, k, v);
  for (const auto& [k, v] : m.outputs) append(outs, k, v);
  root.push_back({"manifest", head});
  root.push_back({"config", cfg});
  root.push_back({"outputs", outs});
  std::ostringstream os;
  pt::write_ini(os, root);
  return os.str();
}

Manifest parse_manifest(const std::string& text) {
  pt::ptree root;
  std::istringstream is(text);
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::parse_error, std::string("manifest: ") + e.what());
  }
  Manifest m;
  for (const auto& [section, tree] : root) {
    if (section == "manifest") {
      for (const auto& [k, v] : tree) {
        const auto s = v.data();
        if (k == "version") {
          m.version = s;
        } else if (k == "master_seed") {
          auto r = std::from_chars(s.data(), s.data() + s.size(), m.master_seed);
          if (r.ec != std::errc()) fail(ErrorCode::parse_error, "manifest: bad master_seed");
        } else if (k == "duration_seconds") {
          m.duration_seconds = std::stod(s);
        } else {
          fail(ErrorCode::parse_error, "manifest: unknown key " + k);
        }
      }
    } else if (section == "config") {
      for (const auto& [k, v] : tree) m.config.emplace_back(k, v.data());
    } else if (section == "outputs") {
      for (const auto& [k, v] : tree) m.outputs.emplace_back(k, v.data());
    } else {
      fail(ErrorCode::parse_error, "manifest: unknown section " + section);
    }
  }
  return m;
}

Manifest write_manifest(const std::filesystem::path& dir, const KeyValues& config,
                        std::uint64_t master_seed, double duration_seconds,
                        const std::vector<std::string>& output_files) {
  Manifest m;
  m.version = artifact_version();
  m.master_seed = master_seed;
  m.duration_seconds = duration_seconds;
  m.config = config;
  for (const auto& f : output_files) m.outputs.emplace_back(f, sha256_file(dir / f));
  const auto path = dir / "manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path.string());
  out << serialize_manifest(m);
  if (!out) fail(ErrorCode::io_error, "write failed: " + path.string());
  return m;
}

}  // namespace rwrs::simkit
