// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "swdstyle/engine.hpp"
#include "swdstyle/errors.hpp"
#include "swdstyle/image_io.hpp"

namespace {

using namespace swdstyle;

ExtractorSpec small_extractor() {
  ExtractorSpec s;
  s.widths = {8, 16, 32, 32};
  return s;
}

StylizeJob small_job(const ImageBuffer& content, const ImageBuffer& style, std::size_t iters) {
  StylizeJob job;
  job.content = content;
  job.styles = {style};
  job.extractor = small_extractor();
  job.iterations = iters;
  job.loss.projection_fraction = 0.5;
  return job;
}

RegionMask halves(std::size_t h, std::size_t w) {
  std::vector<std::uint8_t> labels(h * w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) labels[y * w + x] = x >= w / 2 ? 1 : 0;
  }
  return RegionMask(h, w, std::move(labels));
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

TEST(Stylize, StyleEqualContentStaysPut) {
  std::mt19937_64 rng(1);
  const ImageBuffer img = fixtures::random_image(rng, 16, 16);
  const StylizeResult r = stylize(small_job(img, img, 30));
  double drift = 0.0;
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    drift = std::max(drift, std::abs(r.image.data()[i] - img.data()[i]));
  }
  EXPECT_LT(drift, 1e-3);
}

TEST(Stylize, LossDecreases) {
  const ImageBuffer content = load_image(fixtures::bundled("content.png"));
  const ImageBuffer style = load_image(fixtures::bundled("style.png"));
  const StylizeResult r = stylize(small_job(content, style, 200));
  ASSERT_EQ(r.trace.rows.size(), 200u);
  std::vector<double> first, last;
  for (std::size_t i = 0; i < 50; ++i) {
    first.push_back(r.trace.rows[i].total);
    last.push_back(r.trace.rows[150 + i].total);
  }
  EXPECT_LT(median(last), median(first));
  for (const auto& row : r.trace.rows) {
    EXPECT_NEAR(row.total, row.style + row.content, 1e-12);
    EXPECT_EQ(row.per_layer.size(), r.trace.layer_ids.size());
  }
}

TEST(Stylize, NoiseMovesTowardConstantColour) {
  std::mt19937_64 rng(2);
  const ImageBuffer noise = fixtures::random_image(rng, 16, 16);
  const ImageBuffer flat(16, 16, 3, std::vector<double>(16 * 16 * 3, 0.4));
  StylizeJob job = small_job(noise, flat, 400);
  job.loss.content_weight = 0.0;
  job.learning_rate = 0.01;
  const StylizeResult r = stylize(job);
  for (std::size_t c = 0; c < 3; ++c) {
    double err = 0.0;
    for (std::size_t y = 0; y < 16; ++y) {
      for (std::size_t x = 0; x < 16; ++x) err += std::abs(r.image.at(y, x, c) - 0.4);
    }
    EXPECT_LT(err / 256.0, 1e-2) << "channel " << c;
  }
}

TEST(Stylize, ExcludedPixelsAreUntouched) {
  const ImageBuffer content = load_image(fixtures::bundled("content.png"));
  const ImageBuffer style = load_image(fixtures::bundled("style.png"));
  StylizeJob job = small_job(content, style, 20);
  job.content_mask = halves(content.height(), content.width());
  job.loss.exclude_label = 0;
  const StylizeResult r = stylize(job);
  bool changed = false;
  for (std::size_t y = 0; y < content.height(); ++y) {
    for (std::size_t x = 0; x < content.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (x < content.width() / 2) {
          ASSERT_EQ(r.image.at(y, x, c), content.at(y, x, c));
        } else {
          changed = changed || r.image.at(y, x, c) != content.at(y, x, c);
        }
      }
    }
  }
  EXPECT_TRUE(changed);
}

TEST(Stylize, Deterministic) {
  const ImageBuffer content = load_image(fixtures::bundled("content.png"));
  const ImageBuffer style = load_image(fixtures::bundled("style.png"));
  const StylizeJob job = small_job(content, style, 10);
  const StylizeResult a = stylize(job);
  const StylizeResult b = stylize(job);
  EXPECT_EQ(a.image, b.image);
  for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
    EXPECT_EQ(a.trace.rows[i].total, b.trace.rows[i].total);
  }
  StylizeJob other = job;
  other.seed = job.seed + 1;
  EXPECT_NE(stylize(other).image, a.image);
}

TEST(Stylize, SnapshotsAndTraceCsv) {
  std::mt19937_64 rng(3);
  const ImageBuffer img = fixtures::random_image(rng, 16, 16);
  StylizeJob job = small_job(img, fixtures::random_image(rng, 16, 16), 6);
  std::vector<std::size_t> seen;
  job.snapshot_every = 2;
  job.on_snapshot = [&](std::size_t it, const ImageBuffer&) { seen.push_back(it); };
  const StylizeResult r = stylize(job);
  EXPECT_EQ(seen.size(), 3u);
  std::ostringstream csv;
  write_trace_csv(r.trace, csv);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "iteration,total,layer_1,layer_2,layer_3,layer_4,layer_5,layer_6,layer_7,layer_8,ms,"
            "loss_ms");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST(Stylize, JobValidation) {
  std::mt19937_64 rng(4);
  const ImageBuffer img = fixtures::random_image(rng, 16, 16);
  StylizeJob two = small_job(img, img, 1);
  two.styles.push_back(img);
  EXPECT_THROW(stylize(two), DomainError);  // several styles need a mask

  StylizeJob style_mask_only = small_job(img, img, 1);
  style_mask_only.style_mask = halves(16, 16);
  EXPECT_THROW(stylize(style_mask_only), DomainError);

  StylizeJob exclude = small_job(img, img, 1);
  exclude.loss.exclude_label = 0;
  EXPECT_THROW(stylize(exclude), DomainError);

  StylizeJob tiny = small_job(fixtures::random_image(rng, 8, 8), img, 1);
  EXPECT_THROW(stylize(tiny), DimensionError);

  StylizeJob bad_mask = small_job(img, img, 1);
  bad_mask.content_mask = halves(8, 16);
  EXPECT_THROW(stylize(bad_mask), DimensionError);
}

TEST(StyleSpecBuild, StylesMapToLabelsInOrder) {
  std::mt19937_64 rng(5);
  const ImageBuffer img = fixtures::random_image(rng, 16, 16);
  std::vector<std::uint8_t> labels(16 * 16);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<std::uint8_t>(i % 3);
  StylizeJob job = small_job(img, img, 1);
  job.styles.push_back(fixtures::random_image(rng, 16, 16));
  job.content_mask = RegionMask(16, 16, labels);
  const FeatureExtractor extractor(job.extractor);
  EXPECT_THROW(build_style_spec(job, extractor), DomainError);  // 3 labels, 2 styles
  job.loss.exclude_label = 1;
  EXPECT_NO_THROW(build_style_spec(job, extractor));
}

}  // namespace
