#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace lte::detail {

/// Runs work(i) for i in [0, blocks) on up to `threads` threads and feeds the
/// results to merge() strictly in index order, so the merged value does not
/// depend on scheduling. The first exception (lowest block index) is
/// rethrown after all threads stop.
template <class Work, class Merge>
void ordered_blocks(std::size_t blocks, unsigned threads, Work&& work, Merge&& merge) {
  using Result = decltype(work(std::size_t{0}));
  if (blocks == 0) return;
  if (threads <= 1 || blocks == 1) {
    for (std::size_t i = 0; i < blocks; ++i) merge(work(i));
    return;
  }

  std::vector<std::optional<Result>> pending(blocks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::size_t merged = 0;
  std::exception_ptr error;
  std::size_t error_block = blocks;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= blocks || stop.load()) return;
      try {
        Result r = work(i);
        std::lock_guard<std::mutex> lock(mu);
        pending[i].emplace(std::move(r));
        while (merged < blocks && pending[merged] && !error) {
          merge(std::move(*pending[merged]));
          pending[merged].reset();
          ++merged;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < error_block) {
          error = std::current_exception();
          error_block = i;
        }
        stop.store(true);
      }
    }
  };

  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace lte::detail
