// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "paqs/io/csv.hpp"
#include "paqs/io/manifest.hpp"
#include "paqs/io/schedule_io.hpp"
#include "paqs/io/sha256.hpp"
#include "paqs/protocols/config.hpp"

using namespace paqs;

namespace {

std::string temp_path(const char* name) {
  return std::string("/tmp/paqs_io_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("sha256 matches published test vectors", "[io]") {
  REQUIRE(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  REQUIRE(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  std::string big(1000000, 'a');
  const std::string expect =
      "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0";
  REQUIRE(sha256_hex(big) == expect);

  // Streaming in uneven chunks covers the buffer boundary paths.
  Sha256 h;
  std::size_t off = 0;
  std::size_t chunk = 1;
  while (off < big.size()) {
    std::size_t take = std::min(chunk, big.size() - off);
    h.update(big.data() + off, take);
    off += take;
    chunk = chunk * 3 + 7;
  }
  REQUIRE(h.hex_digest() == expect);
}

TEST_CASE("sha256_file agrees with the in-memory digest", "[io]") {
  std::string path = temp_path("digest.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "abc";
  }
  REQUIRE(sha256_file(path) == sha256_hex("abc"));
  std::remove(path.c_str());
  REQUIRE_THROWS_AS(sha256_file(path), PaqsError);
}

TEST_CASE("format_e12 pins the cell format", "[io]") {
  REQUIRE(format_e12(0.5) == "5.000000000000e-01");
  REQUIRE(format_e12(0.0) == "0.000000000000e+00");
  REQUIRE(format_e12(-123.456) == "-1.234560000000e+02");
  REQUIRE_THROWS_AS(format_e12(std::nan("")), PaqsError);
  REQUIRE_THROWS_AS(format_e12(INFINITY), PaqsError);
}

TEST_CASE("thinned_rows keeps endpoints and the cap", "[io]") {
  auto idx = thinned_rows(3001, 2000);
  REQUIRE(idx.size() == 1501);
  REQUIRE(idx.front() == 0);
  REQUIRE(idx.back() == 3000);
  for (std::size_t i = 1; i + 1 < idx.size(); ++i)
    REQUIRE(idx[i] - idx[i - 1] == 2);

  auto small = thinned_rows(5, 2000);
  REQUIRE(small == std::vector<std::size_t>{0, 1, 2, 3, 4});
  REQUIRE(thinned_rows(0, 10).empty());
  auto pair = thinned_rows(100, 2);
  REQUIRE(pair.front() == 0);
  REQUIRE(pair.back() == 99);
}

TEST_CASE("schedule csv round-trips through disk", "[io]") {
  FeedbackSchedule s;
  for (int i = 0; i < 57; ++i) {
    s.times.push_back(1e-3 * i);
    s.a1.push_back(std::sin(0.37 * i) * 2.7);
    s.a2.push_back(std::cos(0.51 * i) * -1.3);
  }
  s.fingerprint = "6abda32e8aff7b00";

  std::string path = temp_path("schedule.csv");
  write_schedule_csv(path, s);
  FeedbackSchedule r = read_schedule_csv(path);

  REQUIRE(r.fingerprint == s.fingerprint);
  REQUIRE(r.size() == s.size());
  // Cells are written at 13 significant digits, so read-back is close but
  // not bitwise.
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE_THAT(r.times[i], Catch::Matchers::WithinRel(s.times[i], 1e-11) ||
                                 Catch::Matchers::WithinAbs(s.times[i], 1e-15));
    REQUIRE_THAT(r.a1[i], Catch::Matchers::WithinRel(s.a1[i], 1e-11));
    REQUIRE_THAT(r.a2[i], Catch::Matchers::WithinRel(s.a2[i], 1e-11));
  }
  std::remove(path.c_str());
}

TEST_CASE("schedule reader rejects malformed files", "[io]") {
  std::string path = temp_path("bad_schedule.csv");

  {
    std::ofstream out(path);
    out << "time_us,a1,a2\n0,1,2\n";
  }
  REQUIRE_THROWS_WITH(read_schedule_csv(path),
                      Catch::Matchers::ContainsSubstring("fingerprint"));

  {
    std::ofstream out(path);
    out << "# fingerprint=deadbeef00000000\nwrong,header\n";
  }
  REQUIRE_THROWS_WITH(read_schedule_csv(path),
                      Catch::Matchers::ContainsSubstring("header"));

  {
    std::ofstream out(path);
    out << "# fingerprint=deadbeef00000000\ntime_us,a1,a2\n0,1\n";
  }
  REQUIRE_THROWS_AS(read_schedule_csv(path), PaqsError);

  {
    std::ofstream out(path);
    out << "# fingerprint=deadbeef00000000\ntime_us,a1,a2\n0,1,zebra\n";
  }
  REQUIRE_THROWS_AS(read_schedule_csv(path), PaqsError);

  std::remove(path.c_str());
  REQUIRE_THROWS_AS(read_schedule_csv(path), PaqsError);
}

TEST_CASE("fidelity csv writes a thinned, validated series", "[io]") {
  std::vector<double> t, m, e;
  for (int i = 0; i <= 3000; ++i) {
    t.push_back(1e-3 * i);
    m.push_back(0.5 + 1e-4 * i);
    e.push_back(1e-3);
  }
  std::string path = temp_path("fidelity.csv");
  write_fidelity_csv(path, t, m, e);
  std::string text = slurp(path);
  REQUIRE(text.rfind("time_us,mean_fidelity,sem\n", 0) == 0);
  std::size_t lines = std::count(text.begin(), text.end(), '\n');
  REQUIRE(lines == 1502);  // header + 1501 thinned rows

  write_fidelity_csv(path, t, m, e, /*raw=*/true);
  text = slurp(path);
  REQUIRE(std::count(text.begin(), text.end(), '\n') == 3002);
  std::remove(path.c_str());

  std::vector<double> bad_t = {0.0, 0.5, 0.5};
  std::vector<double> v3 = {1, 2, 3};
  REQUIRE_THROWS_WITH(write_fidelity_csv(path, bad_t, v3, v3),
                      Catch::Matchers::ContainsSubstring("ascend"));
  std::vector<double> v2 = {1, 2};
  REQUIRE_THROWS_WITH(write_fidelity_csv(path, bad_t, v2, v3),
                      Catch::Matchers::ContainsSubstring("mismatch"));
}

TEST_CASE("histogram csv partitions the angle axis", "[io]") {
  std::vector<double> snaps = {0.5, 1.0};
  std::vector<std::vector<double>> hist = {{0.25, 0.25, 0.25, 0.25},
                                           {1.0, 0.0, 0.0, 0.0}};
  std::string path = temp_path("hist.csv");
  write_histogram_csv(path, snaps, hist);
  std::string text = slurp(path);
  REQUIRE(text.rfind("snapshot_time_us,bin_lo_rad,bin_hi_rad,frequency\n", 0) ==
          0);
  REQUIRE(std::count(text.begin(), text.end(), '\n') == 9);

  // Bin edges tile [0, pi] without gaps.
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  double prev_hi = 0.0;
  int row = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    double v[4];
    for (int c = 0; c < 4; ++c) {
      std::getline(cells, cell, ',');
      v[c] = std::stod(cell);
    }
    if (row % 4 == 0) prev_hi = 0.0;
    REQUIRE_THAT(v[1], Catch::Matchers::WithinAbs(prev_hi, 1e-12));
    prev_hi = v[2];
    ++row;
  }
  REQUIRE_THAT(prev_hi, Catch::Matchers::WithinAbs(pi, 1e-12));
  std::remove(path.c_str());

  REQUIRE_THROWS_AS(write_histogram_csv(path, snaps, {{1.0}}), PaqsError);
}

TEST_CASE("manifest json carries config echo and artifact digests", "[io]") {
  nlohmann::json cfg = {{"protocol", "tea"},    {"target", "w"},
                        {"n_qubits", 3},        {"k_mhz", 1.0},
                        {"t_final_us", 3.0},    {"n_traj", 10},
                        {"seed", 7},            {"output_dir", "out"}};
  RunManifest m;
  m.config = parse_config_json(cfg);
  m.wall_time_s = 1.25;
  m.artifacts.push_back({"fidelity.csv", sha256_hex("abc")});

  nlohmann::json j = nlohmann::json::parse(manifest_json(m));
  REQUIRE(j["tool"] == "paqs-sim");
  REQUIRE(j["version"].get<std::string>() == kVersion);
  REQUIRE(j["config"]["protocol"] == "tea");
  REQUIRE(j["config"]["n_qubits"] == 3);
  REQUIRE(j["config_sha256"] ==
          sha256_hex(canonical_config_json(m.config)));
  REQUIRE(j["physics_fingerprint"] == "6abda32e8aff7b00");
  REQUIRE(j["wall_time_s"] == 1.25);
  REQUIRE(j["artifacts"].size() == 1);
  REQUIRE(j["artifacts"][0]["name"] == "fidelity.csv");
  REQUIRE(j["artifacts"][0]["sha256"] == sha256_hex("abc"));

  std::string path = temp_path("manifest.json");
  write_manifest(path, m);
  REQUIRE(slurp(path) == manifest_json(m));
  std::remove(path.c_str());
}
