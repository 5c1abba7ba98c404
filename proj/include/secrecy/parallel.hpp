// SPDX-License-Identifier: MIT
//
// Deterministic block-parallel Monte Carlo reduction. Sample indices are
// grouped into fixed blocks of 1024; each block is accumulated serially and
// the per-block partials are combined by a pairwise tree in block order.
// Workers only ever claim whole blocks, so the result is bit-identical for
// any worker count, including 1.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace secrecy {

inline constexpr std::uint64_t kReductionBlock = 1024;

// Sum, sum of squares, and count for K statistics accumulated jointly.
template <int K>
struct Moments {
  std::array<double, K> sum{};
  std::array<double, K> sumsq{};
  std::uint64_t count = 0;

  void add(const std::array<double, K>& x) {
    for (int k = 0; k < K; ++k) {
      sum[k] += x[k];
      sumsq[k] += x[k] * x[k];
    }
    ++count;
  }

  void combine(const Moments& o) {
    for (int k = 0; k < K; ++k) {
      sum[k] += o.sum[k];
      sumsq[k] += o.sumsq[k];
    }
    count += o.count;
  }

  double mean(int k) const { return count ? sum[k] / double(count) : 0.0; }

  // Standard error of the mean of statistic k.
  double stderr_mean(int k) const {
    if (count < 2) return 0.0;
    const double m = mean(k);
    const double var = sumsq[k] / double(count) - m * m;
    return var > 0.0 ? std::sqrt(var / double(count)) : 0.0;
  }
};

// Worker count for block-parallel loops: SECRECY_WORKERS if set, else 1.
inline unsigned worker_count_from_env() {
  if (const char* s = std::getenv("SECRECY_WORKERS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 1;
}

// Evaluates fn(i) -> std::array<double, K> for i in [0, n) and reduces the
// per-index statistics deterministically.
template <int K, class Fn>
Moments<K> reduce_indexed(std::uint64_t n, unsigned workers, Fn&& fn) {
  const std::uint64_t n_blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<Moments<K>> partial(n_blocks);

  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t lo = b * kReductionBlock;
    const std::uint64_t hi = std::min(n, lo + kReductionBlock);
    Moments<K> acc;
    for (std::uint64_t i = lo; i < hi; ++i) acc.add(fn(i));
    partial[b] = acc;
  };

  if (workers <= 1 || n_blocks <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    auto drain = [&] {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= n_blocks) return;
        run_block(b);
      }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = std::min<std::uint64_t>(workers, n_blocks);
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }

  // Pairwise tree over blocks in index order (better rounding than a serial
  // left fold, and independent of how blocks were scheduled).
  std::vector<Moments<K>> level = std::move(partial);
  while (level.size() > 1) {
    std::vector<Moments<K>> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t j = 0; j + 1 < level.size(); j += 2) {
      Moments<K> m = level[j];
      m.combine(level[j + 1]);
      up.push_back(m);
    }
    if (level.size() % 2) up.push_back(level.back());
    level = std::move(up);
  }
  return level.empty() ? Moments<K>{} : level[0];
}

// Runs fn(i) for i in [0, n) with workers claiming whole blocks; use when fn
// writes to disjoint preallocated slots (deterministic by construction).
template <class Fn>
void for_each_index(std::uint64_t n, unsigned workers, Fn&& fn) {
  const std::uint64_t n_blocks = (n + kReductionBlock - 1) / kReductionBlock;
  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t lo = b * kReductionBlock;
    const std::uint64_t hi = std::min(n, lo + kReductionBlock);
    for (std::uint64_t i = lo; i < hi; ++i) fn(i);
  };
  if (workers <= 1 || n_blocks <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto drain = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      run_block(b);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = std::min<std::uint64_t>(workers, n_blocks);
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
}

}  // namespace secrecy
