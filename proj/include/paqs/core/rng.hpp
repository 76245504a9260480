// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "paqs/core/types.hpp"

namespace paqs {

// Counter-based noise source.  Every variate is a pure function of
// (master_seed, trajectory_index, draw_index), so trajectory streams are
// identical no matter how work is sharded across threads, and any single
// step can be replayed in isolation.
namespace detail {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t counter_word(uint64_t seed, uint64_t traj, uint64_t draw,
                             uint64_t lane) {
  uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ mix64(traj ^ 0x13198a2e03707344ULL));
  h = mix64(h ^ mix64(draw ^ 0xa4093822299f31d0ULL));
  return mix64(h ^ lane);
}

inline double to_unit_open(uint64_t w) {
  // (0, 1]: never 0 so log() below is always finite.
  return (double((w >> 11)) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

struct NoiseStream {
  uint64_t master_seed = 0;
  uint64_t trajectory_index = 0;

  // Standard normal via Box-Muller on two counter words.  The sine partner
  // is discarded; determinism matters more here than halving the hash count.
  double normal(uint64_t draw_index) const {
    double u1 = detail::to_unit_open(
        detail::counter_word(master_seed, trajectory_index, draw_index, 1));
    double u2 = detail::to_unit_open(
        detail::counter_word(master_seed, trajectory_index, draw_index, 2));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

  double wiener_increment(uint64_t step, double dt) const {
    return normal(step) * std::sqrt(dt);
  }

  // Uniform on (0, 1], drawn from a lane disjoint from the normal() lanes so
  // a uniform and a normal may share a draw index without correlation.
  double uniform(uint64_t draw_index) const {
    return detail::to_unit_open(
        detail::counter_word(master_seed, trajectory_index, draw_index, 0));
  }
};

}  // namespace paqs
