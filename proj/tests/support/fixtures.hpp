// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "swdstyle/tensors.hpp"

namespace fixtures {

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("swdstyle_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline swdstyle::FeatureMap random_map(std::mt19937_64& rng, int layer, std::size_t channels,
                                       std::size_t h, std::size_t w, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  std::vector<double> v(channels * h * w);
  for (double& x : v) x = n(rng);
  return swdstyle::FeatureMap(layer, channels, h, w, std::move(v));
}

inline swdstyle::ImageBuffer random_image(std::mt19937_64& rng, std::size_t h, std::size_t w,
                                          std::size_t c = 3, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(h * w * c);
  for (double& x : v) x = u(rng);
  return swdstyle::ImageBuffer(h, w, c, std::move(v));
}

/// Image whose values are multiples of 1/255 (survives PNG round trips).
inline swdstyle::ImageBuffer random_image_8bit(std::mt19937_64& rng, std::size_t h, std::size_t w,
                                               std::size_t c = 3) {
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<double> v(h * w * c);
  for (double& x : v) x = u(rng) / 255.0;
  return swdstyle::ImageBuffer(h, w, c, std::move(v));
}

inline std::filesystem::path bundled(const std::string& name) {
  return std::filesystem::path(SWDSTYLE_SOURCE_DIR) / "data" / "bundled" / name;
}

}  // namespace fixtures
