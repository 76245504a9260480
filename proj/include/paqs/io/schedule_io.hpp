// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "paqs/io/csv.hpp"
#include "paqs/protocols/schedule.hpp"

namespace paqs {

// Schedule files carry the generating config's physics fingerprint on a
// leading comment line and are written at full step resolution, since they
// are replay inputs rather than plot series.
inline void write_schedule_csv(const std::string& path,
                               const FeedbackSchedule& s) {
  validate_schedule(s);
  CsvWriter w(path);
  w.raw_line("# fingerprint=" + s.fingerprint);
  w.raw_line("time_us,a1,a2");
  for (std::size_t i = 0; i < s.size(); ++i)
    w.row({s.times[i], s.a1[i], s.a2[i]});
  w.close();
}

inline FeedbackSchedule read_schedule_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "schedule: cannot open \"" + path + "\"");
  FeedbackSchedule s;
  std::string line;
  require(static_cast<bool>(std::getline(in, line)),
          "schedule: empty file \"" + path + "\"");
  const std::string tag = "# fingerprint=";
  require(line.rfind(tag, 0) == 0,
          "schedule: missing fingerprint line in \"" + path + "\"");
  s.fingerprint = line.substr(tag.size());
  require(static_cast<bool>(std::getline(in, line)) &&
              line == "time_us,a1,a2",
          "schedule: bad header in \"" + path + "\"");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double v[3];
    std::string cell;
    for (int c = 0; c < 3; ++c) {
      require(static_cast<bool>(std::getline(row, cell, ',')),
              "schedule: short row in \"" + path + "\"");
      char* end = nullptr;
      v[c] = std::strtod(cell.c_str(), &end);
      require(end && *end == '\0',
              "schedule: non-numeric cell in \"" + path + "\"");
    }
    s.times.push_back(v[0]);
    s.a1.push_back(v[1]);
    s.a2.push_back(v[2]);
  }
  validate_schedule(s);
  return s;
}

}  // namespace paqs
