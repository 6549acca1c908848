#ifndef MLSGC_PARALLEL_HPP
#define MLSGC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mlsgc {

/// Worker count: `requested` if positive, else the hardware concurrency,
/// capped by the MLSGC_THREADS environment variable when it is set.
inline unsigned worker_count(unsigned requested = 0) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MLSGC_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return std::max(1u, n);
}

/// Runs fn(i) for i in [0, count) on a bounded pool. Items are claimed from
/// a shared counter, so fn must write only to its own slot. The first
/// exception thrown by any item is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mlsgc

#endif  // MLSGC_PARALLEL_HPP
