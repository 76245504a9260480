// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace paqs {

// Resolves the worker count: the PAQS_SIM_WORKERS environment variable takes
// precedence over the requested value; zero or negative means auto.
inline int resolve_workers(int requested) {
  if (const char* env = std::getenv("PAQS_SIM_WORKERS")) {
    try {
      requested = std::stoi(env);
    } catch (...) {
      requested = 0;
    }
  }
  if (requested <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    requested = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return requested;
}

// Runs body(traj, acc) for every trajectory index, spread over a thread pool.
// Trajectories are grouped into fixed consecutive chunks; each chunk owns a
// private accumulator and the chunk results are merged in index order, so the
// floating-point reduction is identical for any worker count.
template <typename Acc, typename MakeAcc, typename Body>
Acc run_chunked_ensemble(int n_traj, int workers, MakeAcc&& make_acc,
                         Body&& body, int chunk_size = 32) {
  if (chunk_size < 1) chunk_size = 1;
  int n_chunks = (n_traj + chunk_size - 1) / chunk_size;
  workers = resolve_workers(workers);
  if (workers > n_chunks) workers = n_chunks;
  if (workers < 1) workers = 1;

  std::vector<Acc> parts;
  parts.reserve(n_chunks);
  for (int c = 0; c < n_chunks; ++c) parts.push_back(make_acc());

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      int lo = c * chunk_size;
      int hi = std::min(n_traj, lo + chunk_size);
      try {
        for (int traj = lo; traj < hi; ++traj) body(traj, parts[c]);
      } catch (...) {
        std::lock_guard<std::mutex> g(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Acc total = std::move(parts[0]);
  for (int c = 1; c < n_chunks; ++c) total.merge(parts[c]);
  return total;
}

}  // namespace paqs
