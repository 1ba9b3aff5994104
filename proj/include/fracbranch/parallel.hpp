// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

// Replicate-level parallelism. Every Monte Carlo driver writes replicate i
// into slot i and reduces serially afterwards, so serial and parallel runs
// produce bit-identical results.

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracbranch {

enum class Execution { serial, parallel };

// Thread cap from FRACBRANCH_THREADS (0 or unset: OpenMP default).
int thread_cap();

template <class Fn>
void for_each_index(std::size_t n, Execution ex, Fn&& fn) {
  if (ex == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int threads = thread_cap();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace fracbranch
