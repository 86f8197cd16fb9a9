#pragma once

// Estimator arithmetic, mergeable accumulators, and the parallel execution
// contract shared by all drivers. Trajectories are processed in fixed-size
// chunks and partial accumulators are merged in chunk order, so every
// estimate is bit-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "reflectwalk/errors.hpp"
#include "reflectwalk/rng.hpp"

namespace reflectwalk {

struct McAccumulator {
  long long count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }

  void merge(const McAccumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

struct McStats {
  double mean = 0.0;
  double variance_of_mean = 0.0;  // population-style sample variance over M, divided by M
  double ci_halfwidth = 0.0;      // 2 sqrt(variance_of_mean)
};

// Empty accumulator yields no stats.
std::optional<McStats> mc_mean(const McAccumulator& acc);

// Common result record for Monte Carlo point estimates.
struct McResult {
  double estimate = 0.0;
  double mc_error = 0.0;  // 2 sqrt(variance of the mean)
  long long M = 0;
  double h = 0.0;  // effective step (or base step of a schedule)
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds
};

// Worker count resolution: explicit request, then REFLECTWALK_WORKERS, then
// hardware concurrency.
int resolve_workers(int requested);

inline constexpr long long kTrajectoryChunk = 256;

// Runs `body(index, stream, acc)` for index in [0, count) across `workers`
// threads. Each fixed chunk of indices owns one accumulator filled in index
// order; chunk accumulators are merged sequentially, so the result does not
// depend on the worker count. A thrown exception aborts the whole run.
template <class Acc, class Body>
Acc parallel_reduce(std::uint64_t seed, long long count, int workers, Body&& body) {
  if (count < 0) throw usage_error("parallel_reduce: negative count");
  const long long n_chunks = (count + kTrajectoryChunk - 1) / kTrajectoryChunk;
  std::vector<Acc> partial(static_cast<std::size_t>(n_chunks));
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> failed{false};

  auto run = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const long long c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const long long begin = c * kTrajectoryChunk;
      const long long end = std::min(count, begin + kTrajectoryChunk);
      try {
        for (long long i = begin; i < end; ++i) {
          RngStream stream(seed, static_cast<std::uint64_t>(i));
          body(i, stream, partial[static_cast<std::size_t>(c)]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const int n_workers = std::max(1, workers);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers - 1));
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  Acc total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace reflectwalk
