#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qgeo {

// Neumaier-compensated summation. merge() folds another accumulator in, so
// block-wise parallel sums stay well conditioned and deterministic.
struct KahanSum {
  double s = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      comp += (s - t) + x;
    else
      comp += (x - t) + s;
    s = t;
  }

  void merge(const KahanSum& o) {
    add(o.s);
    add(o.comp);
  }

  double value() const { return s + comp; }
};

// Deterministic block map-reduce over [0, total). The partition into blocks
// of size `block` is fixed; worker threads may process blocks in any order,
// but results are combined strictly in block order, so the outcome is
// byte-identical for any thread count.
template <class Acc, class BlockFn, class CombineFn>
Acc reduce_blocks(std::int64_t total, std::int64_t block, int threads, const Acc& init,
                  BlockFn block_fn, CombineFn combine) {
  if (total <= 0) return init;
  if (block <= 0) block = total;
  std::int64_t nblocks = (total + block - 1) / block;
  std::vector<Acc> results(static_cast<std::size_t>(nblocks), init);

  auto run_block = [&](std::int64_t b) {
    std::int64_t lo = b * block;
    std::int64_t hi = std::min(total, lo + block);
    results[static_cast<std::size_t>(b)] = block_fn(b, lo, hi);
  };

  if (threads <= 1 || nblocks == 1) {
    for (std::int64_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    int nworkers = static_cast<int>(std::min<std::int64_t>(threads, nblocks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          std::int64_t b = next.fetch_add(1);
          if (b >= nblocks) return;
          try {
            run_block(b);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }

  Acc acc = init;
  for (std::int64_t b = 0; b < nblocks; ++b) acc = combine(acc, results[static_cast<std::size_t>(b)]);
  return acc;
}

}  // namespace qgeo
