#pragma once

// OpenMP loop over independent indices. Each index writes its own output
// slot, so results do not depend on the schedule. The first exception thrown
// by any iteration is rethrown on the calling thread.

#include <exception>
#include <mutex>

#include <omp.h>

namespace anharm {

template <typename Fn>
void parallel_for(long count, Fn&& body) {
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Sets the OpenMP team size; threads <= 0 keeps the runtime default.
inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace anharm
