// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

namespace swdstyle {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a sequence of keys (master seed, iteration, layer, ...) into one
/// stream key. Order matters.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept;

/// Counter-based generator: draw i of stream `key` is a pure function of
/// (key, i), so any draw can be regenerated without replaying the stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  /// Standard normal via Box-Muller; the second variate of each pair is kept.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace swdstyle
