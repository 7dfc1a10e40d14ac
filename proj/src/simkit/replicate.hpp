// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "simkit/error.hpp"
#include "simkit/rng.hpp"

namespace rwrs::simkit {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t master_seed = 0;
};

// Worker count: hardware concurrency capped by RWRS_THREADS (if set).
unsigned worker_count();

// Runs body(i) for i in [0, count) on the worker pool.  Each index must only
// write its own output slot.  If any call throws, the exception of the
// smallest failing index is rethrown after all workers stop.
void parallel_for(std::uint64_t count, const std::function<void(std::uint64_t)>& body,
                  unsigned threads = 0);

// Sample mean and standard error of the mean, reduced in index order.
Estimate summarize(std::span<const double> values, std::uint64_t master_seed);

// Evaluates task on streams (master_seed, stream_base + i), i < replicas, and
// returns the per-replica outputs in replica order.
template <class Task>
std::vector<double> replica_values(Task&& task, std::uint64_t replicas,
                                   std::uint64_t master_seed, std::uint64_t stream_base = 0,
                                   unsigned threads = 0) {
  require(replicas > 0, "replicas must be positive");
  std::vector<double> out(replicas);
  parallel_for(
      replicas,
      [&](std::uint64_t i) {
        RngStream rng(master_seed, stream_base + i);
        out[i] = task(rng);
      },
      threads);
  return out;
}

// Multi-output variant: task writes `width` values into the span it is given.
template <class Task>
std::vector<std::vector<double>> replica_vectors(Task&& task, std::size_t width,
                                                 std::uint64_t replicas,
                                                 std::uint64_t master_seed,
                                                 std::uint64_t stream_base = 0,
                                                 unsigned threads = 0) {
  require(replicas > 0, "replicas must be positive");
  std::vector<double> flat(width * replicas);
  parallel_for(
      replicas,
      [&](std::uint64_t i) {
        RngStream rng(master_seed, stream_base + i);
        task(rng, std::span<double>(flat.data() + i * width, width));
      },
      threads);
  // Transpose to one column per output.
  std::vector<std::vector<double>> cols(width, std::vector<double>(replicas));
  for (std::uint64_t i = 0; i < replicas; ++i)
    for (std::size_t j = 0; j < width; ++j) cols[j][i] = flat[i * width + j];
  return cols;
}

template <class Task>
Estimate run_replicated(Task&& task, std::uint64_t replicas, std::uint64_t master_seed,
                        std::uint64_t stream_base = 0, unsigned threads = 0) {
  const auto v = replica_values(std::forward<Task>(task), replicas, master_seed,
                                stream_base, threads);
  return summarize(v, master_seed);
}

}  // namespace rwrs::simkit
