// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "paqs/core/types.hpp"

namespace paqs {

// Precomputed feedback coefficients on the step grid.  Row s holds the pair
// applied over [times[s], times[s] + dt); a2 is the drift coefficient paired
// with the mean-subtracted readout, matching the deterministic propagation
// that generated it.
struct FeedbackSchedule {
  std::vector<double> times;
  std::vector<double> a1;
  std::vector<double> a2;
  std::string fingerprint;

  std::size_t size() const { return times.size(); }
};

inline void validate_schedule(const FeedbackSchedule& s) {
  require(s.times.size() == s.a1.size() && s.times.size() == s.a2.size(),
          "schedule: column length mismatch");
  require(!s.times.empty(), "schedule: empty");
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    require(std::isfinite(s.times[i]) && std::isfinite(s.a1[i]) &&
                std::isfinite(s.a2[i]),
            "schedule: non-finite entry");
    if (i) require(s.times[i] > s.times[i - 1], "schedule: times must ascend");
  }
}

}  // namespace paqs
