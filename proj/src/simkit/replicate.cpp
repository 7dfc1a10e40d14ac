// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "simkit/replicate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "simkit/summation.hpp"

namespace rwrs::simkit {

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RWRS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::uint64_t count, const std::function<void(std::uint64_t)>& body,
                  unsigned threads) {
  if (count == 0) return;
  if (threads == 0) threads = worker_count();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));

  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};
  std::mutex mu;
  std::exception_ptr err;
  std::uint64_t err_index = std::numeric_limits<std::uint64_t>::max();

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || i > first_bad.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
          first_bad.store(i, std::memory_order_relaxed);
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

Estimate summarize(std::span<const double> values, std::uint64_t master_seed) {
  require(!values.empty(), "replicas must be positive");
  const auto r = static_cast<double>(values.size());
  CompensatedSum s;
  for (double v : values) s.add(v);
  const double mean = s.value() / r;
  CompensatedSum ss;
  for (double v : values) ss.add((v - mean) * (v - mean));
  double se = 0.0;
  if (values.size() > 1) se = std::sqrt(ss.value() / (r - 1.0) / r);
  return Estimate{mean, se, values.size(), master_seed};
}

}  // namespace rwrs::simkit
