// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swdstyle/features.hpp"
#include "swdstyle/swd_loss.hpp"
#include "swdstyle/tensors.hpp"

namespace swdstyle {

constexpr std::uint64_t kDefaultSeed = 0x5D5EED;

/// Pixel-space optimization of `content` towards the feature distributions of
/// one or more style images.
///
/// Targets:
///  - one style, no mask: global transfer;
///  - one style, content mask and style mask: label k of the content is
///    matched against label k of the style;
///  - one style and a content mask only: every non-excluded label is matched
///    against the whole style image;
///  - several styles: require a content mask; the non-excluded labels, in
///    ascending order, take the styles in order.
struct StylizeJob {
  ImageBuffer content;
  std::vector<ImageBuffer> styles;
  std::optional<RegionMask> content_mask;
  std::optional<RegionMask> style_mask;
  LossConfig loss;
  ExtractorSpec extractor;
  std::size_t iterations = 1000;
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  /// Calls on_snapshot every `snapshot_every` iterations (0 disables).
  std::size_t snapshot_every = 0;
  std::function<void(std::size_t, const ImageBuffer&)> on_snapshot;

  void validate() const;
};

struct TraceRow {
  std::size_t iteration = 0;
  double total = 0.0;
  double style = 0.0;
  double content = 0.0;
  std::vector<double> per_layer;
  double ms = 0.0;       // wall clock for the whole iteration
  double loss_ms = 0.0;  // style + content loss and their feature gradients only
};

struct RunTrace {
  std::vector<int> layer_ids;
  std::vector<TraceRow> rows;
};

struct StylizeResult {
  ImageBuffer image;
  RunTrace trace;
};

/// Region targets as they will be used by stylize(); exposed for
/// diagnostics and tests.
StyleSpec build_style_spec(const StylizeJob& job, const FeatureExtractor& extractor);

StylizeResult stylize(const StylizeJob& job);

/// Header: iteration,total,layer_<id>...,ms,loss_ms. Numbers use 9
/// significant digits.
void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path);

/// Fixed-seed evaluation metric: uniform SWD with a full projection budget
/// (K = N per layer) between the taps of `image` and `style`, summed over
/// layers.
double evaluate_swd(const ImageBuffer& image, const ImageBuffer& style,
                    const ExtractorSpec& spec = {}, std::uint64_t seed = kDefaultSeed);

/// As evaluate_swd, restricted to the pixels of `image` whose (downsampled)
/// label is `label`, against the whole of `style`.
double evaluate_region_swd(const ImageBuffer& image, const RegionMask& mask, int label,
                           const ImageBuffer& style, const ExtractorSpec& spec = {},
                           std::uint64_t seed = kDefaultSeed);

struct BenchmarkRun {
  std::string name;
  double projection_fraction = 0.0;
  Weighting mode = Weighting::uniform;
  StylizeResult result;
  double mean_loss_ms = 0.0;
  double final_loss = 0.0;  // training loss at the last iteration
  double final_eval = 0.0;  // evaluate_swd of the final image
};

struct BenchmarkResult {
  BenchmarkRun uniform;     // uniform weighting, full budget
  BenchmarkRun importance;  // importance weighting, 5% budget
  double speedup = 0.0;     // uniform.mean_loss_ms / importance.mean_loss_ms
  double relative_gap = 0.0;  // |loss_iw - loss_uniform| / loss_uniform
  double eval_gap = 0.0;      // same, on final_eval
};

/// Runs `job` twice, differing only in weighting and projection budget.
BenchmarkResult benchmark_iw_vs_vanilla(const StylizeJob& job, double iw_fraction = 0.05);

/// uniform.csv, importance.csv and summary.txt (key=value lines).
void write_benchmark(const BenchmarkResult& result, const std::filesystem::path& dir);

}  // namespace swdstyle
