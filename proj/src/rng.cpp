// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/rng.hpp"

#include <cmath>
#include <numbers>

namespace swdstyle {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k));
  }
  return h;
}

std::uint64_t CounterRng::next_u64() noexcept {
  const std::uint64_t c = counter_++;
  return mix64(key_ ^ mix64(c + 0xD1B54A32D192ED03ULL));
}

double CounterRng::uniform() noexcept {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t k = next_u64() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace swdstyle
