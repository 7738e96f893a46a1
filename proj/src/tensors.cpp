// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swdstyle/errors.hpp"

namespace swdstyle {
namespace {

void check_unit_range(std::span<const double> data) {
  for (double v : data) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw_domain("image value outside [0, 1]: " + std::to_string(v));
    }
  }
}

}  // namespace

ImageBuffer::ImageBuffer(std::size_t height, std::size_t width, std::size_t channels)
    : height_(height), width_(width), channels_(channels),
      data_(height * width * channels, 0.0) {}

ImageBuffer::ImageBuffer(std::size_t height, std::size_t width, std::size_t channels,
                         std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (data_.size() != height * width * channels) {
    throw_dimension("image data length " + std::to_string(data_.size()) + " != " +
                    std::to_string(height) + "x" + std::to_string(width) + "x" +
                    std::to_string(channels));
  }
  check_unit_range(data_);
}

void ImageBuffer::set(std::size_t y, std::size_t x, std::size_t c, double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw_domain("image value outside [0, 1]: " + std::to_string(v));
  }
  data_[(y * width_ + x) * channels_ + c] = v;
}

FeatureMap::FeatureMap(int layer_id, std::size_t channels, std::size_t height,
                       std::size_t width, std::vector<double> data)
    : layer_id_(layer_id), channels_(channels), height_(height), width_(width),
      data_(std::move(data)) {
  if (layer_id < 0) throw_domain("negative layer id");
  if (channels == 0 || height == 0 || width == 0) {
    throw_dimension("feature map must have at least one pixel and one channel");
  }
  if (data_.size() != channels * height * width) {
    throw_dimension("feature data length " + std::to_string(data_.size()) +
                    " does not match " + std::to_string(height) + "x" +
                    std::to_string(width) + "x" + std::to_string(channels));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw_domain("feature map contains non-finite values");
  }
}

GradientBuffer GradientBuffer::zeros_like(const FeatureMap& map) {
  return GradientBuffer{map.layer_id(), map.channels(), map.height(), map.width(),
                        std::vector<double>(map.data().size(), 0.0)};
}

RegionMask::RegionMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> labels)
    : height_(height), width_(width), labels_(std::move(labels)) {
  if (height == 0 || width == 0) throw_dimension("mask must be non-empty");
  if (labels_.size() != height * width) {
    throw_dimension("mask label count does not match its dimensions");
  }
  max_label_ = *std::max_element(labels_.begin(), labels_.end());
}

std::vector<int> RegionMask::present_labels() const {
  std::vector<bool> seen(256, false);
  for (auto l : labels_) seen[l] = true;
  std::vector<int> out;
  for (int l = 0; l < 256; ++l) {
    if (seen[l]) out.push_back(l);
  }
  return out;
}

RegionMask downsample_mask(const RegionMask& mask, std::size_t target_height,
                           std::size_t target_width) {
  if (target_height == 0 || target_width == 0) {
    throw_dimension("downsample target must be non-empty");
  }
  if (target_height > mask.height() || target_width > mask.width()) {
    throw_dimension("downsample target exceeds mask dimensions");
  }
  std::vector<std::uint8_t> out(target_height * target_width);
  for (std::size_t y = 0; y < target_height; ++y) {
    const std::size_t sy = (2 * y + 1) * mask.height() / (2 * target_height);
    for (std::size_t x = 0; x < target_width; ++x) {
      const std::size_t sx = (2 * x + 1) * mask.width() / (2 * target_width);
      out[y * target_width + x] = mask.at(sy, sx);
    }
  }
  return RegionMask(target_height, target_width, std::move(out));
}

FeatureMap image_to_feature_map(const ImageBuffer& image, int layer_id) {
  return FeatureMap(layer_id, image.channels(), image.height(), image.width(),
                    std::vector<double>(image.data().begin(), image.data().end()));
}

ImageBuffer feature_map_to_image(const FeatureMap& map) {
  return ImageBuffer(map.height(), map.width(), map.channels(),
                     std::vector<double>(map.data().begin(), map.data().end()));
}

}  // namespace swdstyle
