// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swdstyle/slicing.hpp"
#include "swdstyle/tensors.hpp"

namespace swdstyle {

enum class Weighting {
  uniform,     // plain mean over sampled directions
  importance,  // softmax of the per-direction distances
};

/// Number of directions for a layer of `channels` features at budget
/// `fraction`: max(1, round(fraction * channels)). 0.05 gives 3/6/13/26 for
/// widths 64/128/256/512.
std::size_t projection_budget(std::size_t channels, double fraction);

struct LossConfig {
  Weighting mode = Weighting::importance;
  double projection_fraction = 0.05;
  /// Optional explicit per-layer counts (by layer position); overrides the
  /// fraction when non-empty.
  std::vector<std::size_t> projection_counts;
  /// Weight of the content term (lambda).
  double content_weight = 0.1;
  double style_weight = 1.0;
  /// Region label skipped by the style loss.
  std::optional<int> exclude_label;
  /// Let gradients flow through the softmax weights. Off by default: weights
  /// are treated as constants, as in the importance-sampling estimator.
  bool weight_gradient = false;
  /// Quantile-resample populations of unequal length instead of failing.
  bool allow_resample = true;

  void validate() const;
  std::size_t projections_for(std::size_t layer_index, std::size_t channels) const;
};

struct Sw1dResult {
  double value = 0.0;
  std::vector<double> gradient;  // d value / d p
};

/// (1/n) * ||sort(p) - sort(q)||^2 for |p| = |q| = n. Ties break by index.
Sw1dResult sw1d(std::span<const double> p, std::span<const double> q);

/// Linear interpolation of sort(p) at `target_len` evenly spaced quantiles
/// with inclusive endpoints (a single output takes the median position).
std::vector<double> quantile_resample(std::span<const double> p, std::size_t target_len);

/// sw1d after resampling the longer population down to the shorter length.
Sw1dResult sw1d_resampled(std::span<const double> p, std::span<const double> q);

/// Region-partitioned sw1d: labels 0..max_label each form a region; regions
/// are matched by label and their costs summed. Regions empty on both sides
/// contribute nothing; `exclude` drops a region entirely (zero gradient).
Sw1dResult mr_sw1d(std::span<const double> p, std::span<const double> q,
                   std::span<const std::uint8_t> labels_p,
                   std::span<const std::uint8_t> labels_q, int max_label,
                   std::optional<int> exclude = std::nullopt);

struct SwdResult {
  double value = 0.0;
  GradientBuffer gradient;
  std::vector<double> distances;  // per direction
  std::vector<double> weights;    // per direction, sum to 1
};

/// Mean of sw1d over the projected populations.
SwdResult swd(const FeatureMap& src, const FeatureMap& tgt, const ProjectionSet& proj,
              bool allow_resample = true);

/// Softmax-weighted sum of per-direction distances.
SwdResult iw_swd(const FeatureMap& src, const FeatureMap& tgt, const ProjectionSet& proj,
                 bool weight_gradient = false, bool allow_resample = true);

/// Combines per-direction distances: uniform weights 1/K or softmax weights.
/// Returns (value, weights).
std::pair<double, std::vector<double>> combine_distances(std::span<const double> distances,
                                                         Weighting mode);

struct ContentResult {
  double value = 0.0;
  std::vector<GradientBuffer> gradients;
};

/// lambda * sum_l ||F_l - R_l||^2 / (M_l N_l).
ContentResult content_loss(std::span<const FeatureMap> src, std::span<const FeatureMap> ref,
                           double lambda);

struct LayerShape {
  int layer_id = 0;
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  static LayerShape of(const FeatureMap& map) {
    return {map.layer_id(), map.channels(), map.height(), map.width()};
  }
  bool operator==(const LayerShape&) const = default;
};

/// One style source: its feature taps and, optionally, its label mask at
/// image resolution.
struct StyleTarget {
  std::vector<FeatureMap> layers;
  std::optional<RegionMask> mask;
};

/// Source region `source_label` is matched against target `target`, either
/// restricted to `target_label` or (when empty) the whole target.
struct RegionAssignment {
  int source_label = 0;
  std::size_t target = 0;
  std::optional<int> target_label;
};

struct StyleSpec {
  std::vector<StyleTarget> targets;
  std::optional<RegionMask> source_mask;
  std::vector<RegionAssignment> regions;
  /// Fixed reference activations for the content term; may be empty.
  std::vector<FeatureMap> content_reference;

  /// Whole source against the whole of a single target.
  static StyleSpec global(std::vector<FeatureMap> target_layers);
  /// Region k of the source against region k of the target, for every label
  /// present in either mask.
  static StyleSpec paired(std::vector<FeatureMap> target_layers, RegionMask source_mask,
                          RegionMask target_mask);
};

struct StyleLossResult {
  LossReport report;
  std::vector<GradientBuffer> gradients;  // one per source layer
};

/// Sum over layers of (importance-weighted) sliced Wasserstein distances,
/// region-partitioned when a source mask is present, plus the content term.
///
/// Construction validates the spec against the source layer layout: layer
/// counts and channel widths, and region consistency at every layer
/// resolution (a region may not vanish on one side only). Masks are
/// downsampled once; evaluate() is then reentrant.
class StyleLoss {
 public:
  StyleLoss(StyleSpec spec, std::vector<LayerShape> source_layout, LossConfig config);

  /// Directions for layer l are sample_projections(N_l, K_l,
  /// derive_seed({seed, layer_id})).
  StyleLossResult evaluate(std::span<const FeatureMap> source, std::uint64_t seed) const;

  /// Style-only evaluation with caller-supplied directions per layer.
  StyleLossResult evaluate_with(std::span<const FeatureMap> source,
                                std::span<const ProjectionSet> projections) const;

  const LossConfig& config() const noexcept { return config_; }
  const std::vector<LayerShape>& layout() const noexcept { return layout_; }
  std::size_t projections_for_layer(std::size_t index) const;

  struct RegionPlan {
    std::size_t target = 0;
    std::vector<std::uint32_t> source_pixels;  // empty with `source_all`
    std::vector<std::uint32_t> target_pixels;  // empty with `target_all`
    bool source_all = false;
    bool target_all = false;
  };

 private:
  StyleLossResult run(std::span<const FeatureMap> source,
                      std::span<const ProjectionSet> projections, bool with_content) const;

  StyleSpec spec_;
  std::vector<LayerShape> layout_;
  LossConfig config_;
  std::vector<std::vector<RegionPlan>> plans_;  // per layer
};

/// Single-shot convenience wrapper around StyleLoss.
StyleLossResult style_loss(std::span<const FeatureMap> src_layers, StyleSpec spec,
                           const LossConfig& config, std::uint64_t seed);

}  // namespace swdstyle
