// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "paqs/io/sha256.hpp"
#include "paqs/protocols/config.hpp"
#include "paqs/version.hpp"

namespace paqs {

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "manifest: cannot open \"" + path + "\"");
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    if (got > 0) h.update(buf, static_cast<std::size_t>(got));
  }
  return h.hex_digest();
}

// Written next to the CSV artifacts of every run.  The config echo and the
// artifact digests are deterministic; wall time is the one free field.
struct RunManifest {
  ProtocolConfig config;
  double wall_time_s = 0;
  std::vector<std::pair<std::string, std::string>> artifacts;  // name, sha256
};

inline std::string manifest_json(const RunManifest& m) {
  std::string cfg = canonical_config_json(m.config);
  std::ostringstream os;
  os << "{\n";
  os << "  \"tool\": \"" << kToolName << "\",\n";
  os << "  \"version\": \"" << kVersion << "\",\n";
  os << "  \"config\": " << cfg << ",\n";
  os << "  \"config_sha256\": \"" << sha256_hex(cfg) << "\",\n";
  os << "  \"physics_fingerprint\": \"" << physics_fingerprint(m.config)
     << "\",\n";
  os << "  \"wall_time_s\": " << detail::num17(m.wall_time_s) << ",\n";
  os << "  \"artifacts\": [";
  for (std::size_t i = 0; i < m.artifacts.size(); ++i) {
    if (i) os << ",";
    os << "\n    {\"name\": \"" << m.artifacts[i].first
       << "\", \"sha256\": \"" << m.artifacts[i].second << "\"}";
  }
  if (!m.artifacts.empty()) os << "\n  ";
  os << "]\n}\n";
  return os.str();
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "manifest: cannot open \"" + path + "\"");
  out << manifest_json(m);
}

}  // namespace paqs
