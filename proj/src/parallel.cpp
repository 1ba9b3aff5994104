// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fracbranch {

int thread_cap() {
  int fallback = 1;
#ifdef _OPENMP
  fallback = omp_get_max_threads();
#endif
  const char* env = std::getenv("FRACBRANCH_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    const int cap = std::stoi(env);
    if (cap <= 0) return fallback;
    return cap < fallback ? cap : fallback;
  } catch (const std::exception&) {
    return fallback;
  }
}

}  // namespace fracbranch
