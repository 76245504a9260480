// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "paqs/core/types.hpp"

namespace paqs {

inline std::string format_e12(double v) {
  require(std::isfinite(v), "csv: refusing to write a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

// Row indices that thin a series to at most max_rows entries while always
// keeping the first and last row.
inline std::vector<std::size_t> thinned_rows(std::size_t n,
                                             std::size_t max_rows) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  if (max_rows < 2) max_rows = 2;
  if (n <= max_rows) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  std::size_t stride = (n - 1 + max_rows - 2) / (max_rows - 1);
  for (std::size_t i = 0; i < n - 1; i += stride) idx.push_back(i);
  idx.push_back(n - 1);
  return idx;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    require(static_cast<bool>(out_), "csv: cannot open \"" + path + "\"");
  }

  void raw_line(const std::string& line) { out_ << line << "\n"; }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ",";
      out_ << format_e12(values[i]);
    }
    out_ << "\n";
  }

  void close() { out_.close(); }

 private:
  std::ofstream out_;
};

// time_us,mean_fidelity,sem rows, thinned to max_rows unless raw is set.
inline void write_fidelity_csv(const std::string& path,
                               const std::vector<double>& times,
                               const std::vector<double>& mean,
                               const std::vector<double>& sem,
                               bool raw = false,
                               std::size_t max_rows = 2000,
                               const char* value_name = "mean_fidelity") {
  require(times.size() == mean.size() && times.size() == sem.size(),
          "csv: series length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], "csv: times must ascend");
  CsvWriter w(path);
  w.raw_line(std::string("time_us,") + value_name + ",sem");
  auto rows = raw ? thinned_rows(times.size(), times.size())
                  : thinned_rows(times.size(), max_rows);
  for (std::size_t i : rows) w.row({times[i], mean[i], sem[i]});
  w.close();
}

// snapshot_time_us,bin_lo_rad,bin_hi_rad,frequency rows for every snapshot
// and bin; bins partition [0, pi].
inline void write_histogram_csv(
    const std::string& path, const std::vector<double>& snapshot_times,
    const std::vector<std::vector<double>>& histograms) {
  require(snapshot_times.size() == histograms.size(),
          "csv: snapshot count mismatch");
  CsvWriter w(path);
  w.raw_line("snapshot_time_us,bin_lo_rad,bin_hi_rad,frequency");
  for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
    std::size_t nb = histograms[s].size();
    require(nb > 0, "csv: empty histogram");
    for (std::size_t b = 0; b < nb; ++b)
      w.row({snapshot_times[s], pi * double(b) / double(nb),
             pi * double(b + 1) / double(nb), histograms[s][b]});
  }
  w.close();
}

}  // namespace paqs
