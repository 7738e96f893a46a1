// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/parallel.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace swdstyle {
namespace {

std::atomic<std::size_t> g_max_threads{0};

std::size_t default_threads() {
  if (const char* env = std::getenv("SWDSTYLE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // Unparseable values fall through to the hardware default.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

void set_max_threads(std::size_t n) { g_max_threads.store(n); }

std::size_t max_threads() {
  const std::size_t n = g_max_threads.load();
  return n == 0 ? default_threads() : n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = max_threads();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  tbb::task_arena arena(static_cast<int>(threads));
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n),
                      [&](const tbb::blocked_range<std::size_t>& r) {
                        for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
                      });
  });
}

}  // namespace swdstyle
