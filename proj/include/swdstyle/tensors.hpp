// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace swdstyle {

/// Row-major, channel-interleaved image with values in [0, 1].
class ImageBuffer {
 public:
  ImageBuffer() = default;
  /// Zero-filled image.
  ImageBuffer(std::size_t height, std::size_t width, std::size_t channels);
  /// Takes ownership of `data`; throws DimensionError on a size mismatch and
  /// DomainError on non-finite or out-of-range values.
  ImageBuffer(std::size_t height, std::size_t width, std::size_t channels,
              std::vector<double> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return height_ * width_; }
  bool empty() const noexcept { return data_.empty(); }

  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return data_[(y * width_ + x) * channels_ + c];
  }
  void set(std::size_t y, std::size_t x, std::size_t c, double v);

  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

/// M feature vectors of dimension N laid out pixel-major (M rows of N values),
/// viewed as the uniform discrete measure over its rows.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int layer_id, std::size_t channels, std::size_t height, std::size_t width,
             std::vector<double> data);

  int layer_id() const noexcept { return layer_id_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept { return height_ * width_; }

  double at(std::size_t pixel, std::size_t channel) const {
    return data_[pixel * channels_ + channel];
  }
  std::span<const double> row(std::size_t pixel) const {
    return std::span<const double>(data_).subspan(pixel * channels_, channels_);
  }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const FeatureMap&) const = default;

 private:
  int layer_id_ = 0;
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// dL/dF for one FeatureMap; same shape, mutable.
struct GradientBuffer {
  int layer_id = 0;
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  static GradientBuffer zeros_like(const FeatureMap& map);
  std::size_t pixel_count() const noexcept { return height * width; }
};

/// Per-pixel categorical labels 0..max_label.
class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> labels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  int max_label() const noexcept { return max_label_; }
  std::uint8_t at(std::size_t y, std::size_t x) const { return labels_[y * width_ + x]; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  /// Labels that occur at least once, ascending.
  std::vector<int> present_labels() const;

  bool operator==(const RegionMask&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  int max_label_ = 0;
  std::vector<std::uint8_t> labels_;
};

struct ProjectionStat {
  double distance = 0.0;
  double weight = 0.0;
};

struct LayerLoss {
  int layer_id = 0;
  double value = 0.0;
  std::vector<ProjectionStat> projections;
};

/// Diagnostic breakdown of a style/content loss evaluation.
struct LossReport {
  double total = 0.0;
  double style = 0.0;
  double content = 0.0;
  std::vector<LayerLoss> per_layer;
};

/// Nearest-neighbour resampling at cell centres: target pixel (y, x) takes
/// source pixel (floor((2y+1)H / 2h), floor((2x+1)W / 2w)).
RegionMask downsample_mask(const RegionMask& mask, std::size_t target_height,
                           std::size_t target_width);

/// Raw colours as a layer-0 feature map (one row per pixel). Lossless.
FeatureMap image_to_feature_map(const ImageBuffer& image, int layer_id = 0);
/// Inverse of image_to_feature_map; values must lie in [0, 1].
ImageBuffer feature_map_to_image(const FeatureMap& map);

}  // namespace swdstyle
