#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace floorgcd {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct BlockRange {
  std::int64_t first;
  std::int64_t last;  // inclusive
  std::size_t index;
};

inline std::size_t block_count(std::int64_t first, std::int64_t last, std::int64_t block) {
  if (last < first) return 0;
  return static_cast<std::size_t>((last - first) / block + 1);
}

// Runs fn over fixed-size blocks of [first, last]. The partition depends only
// on `block`, never on the thread count, so per-block results combined in
// index order are thread-count invariant. fn must be safe to run concurrently
// on distinct blocks. The first exception thrown by any worker is rethrown.
inline void for_each_block(std::int64_t first, std::int64_t last, std::int64_t block,
                           unsigned threads, const std::function<void(const BlockRange&)>& fn) {
  const std::size_t nblocks = block_count(first, last, block);
  if (nblocks == 0) return;
  threads = resolve_threads(threads);
  if (threads > nblocks) threads = static_cast<unsigned>(nblocks);

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;

  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= nblocks) return;
      BlockRange r;
      r.index = i;
      r.first = first + static_cast<std::int64_t>(i) * block;
      r.last = std::min(last, r.first + block - 1);
      try {
        fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        next.store(nblocks);  // drain remaining work
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace floorgcd
