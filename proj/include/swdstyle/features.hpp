// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "swdstyle/swd_loss.hpp"
#include "swdstyle/tensors.hpp"

namespace swdstyle {

/// Four stages of [3x3 conv (reflect padding) -> leaky rectifier -> 2x2
/// average pool]. Each stage taps its pre-pool activation and its pooled
/// output, giving 8 feature maps with layer ids 1..8.
///
/// Filters are fixed-seed random matrices orthogonalized by QR. They stand in
/// for a pretrained network; pretrained activations can be brought in through
/// load_external_features instead.
struct ExtractorSpec {
  static constexpr std::size_t kStages = 4;
  std::array<std::size_t, kStages> widths{64, 128, 256, 512};
  double slope = 0.2;
  std::uint64_t seed = 0x5EEDF11735ULL;
  std::size_t min_side = 16;

  std::size_t tap_count() const noexcept { return 2 * kStages; }
};

/// Shapes of the taps produced for an H x W input.
std::vector<LayerShape> tap_shapes(const ExtractorSpec& spec, std::size_t height,
                                   std::size_t width);

class FeatureExtractor {
 public:
  explicit FeatureExtractor(ExtractorSpec spec = {});
  ~FeatureExtractor();
  FeatureExtractor(FeatureExtractor&&) noexcept;
  FeatureExtractor& operator=(FeatureExtractor&&) noexcept;

  const ExtractorSpec& spec() const noexcept { return spec_; }

  /// Forward activations retained for backprop.
  struct Trace;
  struct TraceDeleter {
    void operator()(Trace* t) const noexcept;
  };
  using TracePtr = std::unique_ptr<Trace, TraceDeleter>;

  std::vector<FeatureMap> extract(const ImageBuffer& image) const;
  /// Forward pass that keeps what backprop needs; taps are in trace->taps().
  TracePtr forward(const ImageBuffer& image) const;
  static const std::vector<FeatureMap>& taps(const Trace& trace);

  /// Vector-Jacobian product: gradient of sum_l <G_l, F_l> with respect to
  /// the image pixels (H x W x 3, interleaved).
  std::vector<double> backprop(const Trace& trace, std::span<const GradientBuffer> tap_gradients) const;

  /// Jacobian-vector product: directional derivative of every tap along the
  /// pixel-space direction `direction` (H x W x 3).
  std::vector<std::vector<double>> jvp(const ImageBuffer& image,
                                       std::span<const double> direction) const;

 private:
  struct Filters;
  ExtractorSpec spec_;
  std::unique_ptr<Filters> filters_;
};

std::vector<FeatureMap> extract(const ImageBuffer& image, const ExtractorSpec& spec);
std::vector<double> backprop(const ImageBuffer& image, const ExtractorSpec& spec,
                             std::span<const GradientBuffer> tap_gradients);

/// Loads FMAP files (e.g. activations exported from a pretrained network).
/// Layer ids must be strictly increasing.
std::vector<FeatureMap> load_external_features(std::span<const std::filesystem::path> paths);

/// Per-layer projection counts for a layer list at budget `fraction`.
std::vector<std::size_t> projection_schedule(std::span<const FeatureMap> layers, double fraction);

}  // namespace swdstyle
