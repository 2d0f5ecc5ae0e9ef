#pragma once

// Chunked parallel loops over an index range. Each worker owns one accumulator;
// accumulators are returned in worker order, so exact (integer) reductions are
// independent of the thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace maxvar {

// fn(acc, begin, end) processes indices [begin, end).
template <class Acc, class Fn>
std::vector<Acc> parallel_chunks(std::uint64_t total, std::uint64_t chunk, unsigned threads, const Acc& init, Fn fn) {
  if (chunk == 0) chunk = 1;
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  threads = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, chunks)));
  std::vector<Acc> accs(threads, init);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&](unsigned t) {
    try {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        const std::uint64_t c = next.fetch_add(1);
        if (c >= chunks) return;
        const std::uint64_t begin = c * chunk;
        fn(accs[t], begin, std::min(total, begin + chunk));
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return accs;
}

}  // namespace maxvar
