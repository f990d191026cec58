#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace eqc {

// Mean and standard error of a Monte Carlo average.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_trials)
  std::int64_t n_trials = 0;
  std::uint64_t seed = 0;
};

// Two-pass mean / standard error in index order, so the result depends only on
// the values and not on how they were produced.
MCEstimate summarize(std::span<const double> values, std::uint64_t seed);

// z = |a - b| / sqrt(se_a^2 + se_b^2); 0 when both errors vanish and the means agree.
double z_score(const MCEstimate& a, const MCEstimate& b);

// Number of workers used by run_trials. EQC_THREADS overrides the hardware count.
unsigned worker_count();

// Evaluates fn(i) for i in [0, n) on worker_count() threads and returns the
// results in index order. fn must be safe to call concurrently.
template <class Fn>
auto run_trials(std::int64_t n, Fn&& fn) -> std::vector<decltype(fn(std::int64_t{}))> {
  using T = decltype(fn(std::int64_t{}));
  std::vector<T> out(static_cast<std::size_t>(n));
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(worker_count(), std::max<std::int64_t>(n, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace eqc
