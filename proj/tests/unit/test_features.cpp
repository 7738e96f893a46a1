// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "swdstyle/errors.hpp"
#include "swdstyle/features.hpp"

namespace {

using namespace swdstyle;

std::vector<GradientBuffer> random_tap_gradients(std::mt19937_64& rng,
                                                 const std::vector<FeatureMap>& taps) {
  std::vector<GradientBuffer> g;
  for (const auto& t : taps) {
    GradientBuffer b = GradientBuffer::zeros_like(t);
    b.data = oracle::random_vector(rng, b.data.size());
    g.push_back(std::move(b));
  }
  return g;
}

double pairing(const std::vector<FeatureMap>& taps, const std::vector<GradientBuffer>& g) {
  double s = 0.0;
  for (std::size_t l = 0; l < taps.size(); ++l) s += oracle::dot(taps[l].data(), g[l].data);
  return s;
}

TEST(Extractor, TapShapesMatchShapeCalculator) {
  const FeatureExtractor ex;
  std::mt19937_64 rng(41);
  for (auto [h, w] : std::vector<std::pair<std::size_t, std::size_t>>{{32, 32}, {16, 21}, {19, 16}}) {
    const auto taps = ex.extract(fixtures::random_image(rng, h, w));
    const auto want = oracle::stage_shapes(h, w, {64, 128, 256, 512});
    const auto declared = tap_shapes(ex.spec(), h, w);
    ASSERT_EQ(taps.size(), 8u);
    for (std::size_t l = 0; l < 8; ++l) {
      EXPECT_EQ(taps[l].layer_id(), static_cast<int>(l + 1));
      EXPECT_EQ(taps[l].channels(), want[l].channels);
      EXPECT_EQ(taps[l].height(), want[l].height);
      EXPECT_EQ(taps[l].width(), want[l].width);
      EXPECT_EQ(LayerShape::of(taps[l]), declared[l]);
    }
  }
  const auto s32 = oracle::stage_shapes(32, 32, {64, 128, 256, 512});
  EXPECT_EQ(s32[0].height, 32u);
  EXPECT_EQ(s32[2].height, 16u);
  EXPECT_EQ(s32[4].height, 8u);
  EXPECT_EQ(s32[6].height, 4u);
}

TEST(Extractor, ConstantImageGivesConstantTaps) {
  const ImageBuffer gray(16, 16, 3, std::vector<double>(16 * 16 * 3, 0.3));
  for (const auto& t : extract(gray, ExtractorSpec{})) {
    for (std::size_t p = 1; p < t.pixel_count(); ++p) {
      for (std::size_t c = 0; c < t.channels(); ++c) EXPECT_EQ(t.at(p, c), t.at(0, c));
    }
  }
}

TEST(Extractor, DeterministicAndValidated) {
  std::mt19937_64 rng(42);
  const ImageBuffer img = fixtures::random_image(rng, 16, 16);
  EXPECT_EQ(extract(img, ExtractorSpec{}), FeatureExtractor().extract(img));
  EXPECT_THROW(FeatureExtractor().extract(fixtures::random_image(rng, 15, 32)), DimensionError);
  EXPECT_THROW(FeatureExtractor().extract(fixtures::random_image(rng, 16, 16, 1)), DimensionError);
  ExtractorSpec other;
  other.seed = 1;
  EXPECT_NE(extract(img, other)[0], extract(img, ExtractorSpec{})[0]);
}

TEST(Backprop, ZeroGradientsGiveZero) {
  std::mt19937_64 rng(43);
  const ImageBuffer img = fixtures::random_image(rng, 16, 16);
  std::vector<GradientBuffer> zeros;
  for (const auto& t : extract(img, ExtractorSpec{})) zeros.push_back(GradientBuffer::zeros_like(t));
  for (double v : backprop(img, ExtractorSpec{}, zeros)) EXPECT_EQ(v, 0.0);
  zeros.pop_back();
  EXPECT_THROW(backprop(img, ExtractorSpec{}, zeros), DimensionError);
}

// Rows of the input image that can influence row y of tap `tap` (1-based).
std::pair<long, long> receptive_rows(int tap, long y) {
  const int stage = (tap - 1) / 2;
  long lo = y, hi = y;
  if (tap % 2 == 0) {  // pooled tap
    lo = 2 * lo;
    hi = 2 * hi + 1;
  }
  for (int s = stage; s >= 0; --s) {
    lo -= 1;
    hi += 1;
    if (s > 0) {
      lo = 2 * lo;
      hi = 2 * hi + 1;
    }
  }
  return {lo, hi};
}

TEST(Backprop, OneHotGradientStaysInReceptiveField) {
  std::mt19937_64 rng(44);
  const ImageBuffer img = fixtures::random_image(rng, 32, 32);
  const FeatureExtractor ex;
  const auto trace = ex.forward(img);
  const auto& taps = FeatureExtractor::taps(*trace);
  for (int tap : {1, 2, 3, 4, 5}) {
    std::vector<GradientBuffer> g;
    for (const auto& t : taps) g.push_back(GradientBuffer::zeros_like(t));
    const auto& t = taps[tap - 1];
    const std::size_t y = t.height() / 2, x = t.width() / 2;
    g[tap - 1].data[(y * t.width() + x) * t.channels() + 3] = 1.0;
    const auto grad = ex.backprop(*trace, g);
    const auto [ylo, yhi] = receptive_rows(tap, static_cast<long>(y));
    const auto [xlo, xhi] = receptive_rows(tap, static_cast<long>(x));
    double inside = 0.0;
    for (long py = 0; py < 32; ++py) {
      for (long px = 0; px < 32; ++px) {
        for (int c = 0; c < 3; ++c) {
          const double v = grad[(py * 32 + px) * 3 + c];
          if (py < ylo || py > yhi || px < xlo || px > xhi) {
            EXPECT_EQ(v, 0.0) << "tap " << tap << " at " << py << "," << px;
          } else {
            inside += std::abs(v);
          }
        }
      }
    }
    EXPECT_GT(inside, 0.0);
  }
}

TEST(Backprop, MatchesFiniteDifferences) {
  std::mt19937_64 rng(45);
  const FeatureExtractor ex;
  for (int t = 0; t < 10; ++t) {
    const ImageBuffer img = fixtures::random_image(rng, 16, 16, 3, 0.1, 0.9);
    const auto trace = ex.forward(img);
    const auto g = random_tap_gradients(rng, FeatureExtractor::taps(*trace));
    const auto grad = ex.backprop(*trace, g);
    const auto u = oracle::random_vector(rng, grad.size());
    const auto x0 = std::vector<double>(img.data().begin(), img.data().end());
    const double fd = oracle::fd_directional(
        [&](const std::vector<double>& x) {
          return pairing(ex.extract(ImageBuffer(16, 16, 3, x)), g);
        },
        x0, u, 1e-6);
    EXPECT_LT(oracle::relative_error(oracle::dot(grad, u), fd), 1e-4);
  }
}

TEST(Backprop, IsTheAdjointOfTheJvp) {
  std::mt19937_64 rng(46);
  const FeatureExtractor ex;
  for (int t = 0; t < 10; ++t) {
    const ImageBuffer img = fixtures::random_image(rng, 16 + t % 3, 16 + t % 2);
    const auto trace = ex.forward(img);
    const auto g = random_tap_gradients(rng, FeatureExtractor::taps(*trace));
    const auto u = oracle::random_vector(rng, img.data().size());
    const auto ju = ex.jvp(img, u);
    double lhs = 0.0;
    for (std::size_t l = 0; l < ju.size(); ++l) lhs += oracle::dot(ju[l], g[l].data);
    const double rhs = oracle::dot(u, ex.backprop(*trace, g));
    EXPECT_LT(std::abs(lhs - rhs), 1e-6 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Extractor, SinglePixelLipschitzBound) {
  // Largest tap change per unit change of one pixel value, measured on the
  // default spec and frozen with margin.
  constexpr double kFrozenBound = 2.0;  // measured 1.235
  std::mt19937_64 rng(47);
  const FeatureExtractor ex;
  const double eps = 1e-3;
  double worst = 0.0;
  for (int t = 0; t < 6; ++t) {
    const ImageBuffer img = fixtures::random_image(rng, 16, 16, 3, 0.1, 0.9);
    const auto base = ex.extract(img);
    std::vector<double> v(img.data().begin(), img.data().end());
    const std::size_t i = (t * 97) % v.size();
    v[i] += eps;
    const auto moved = ex.extract(ImageBuffer(16, 16, 3, v));
    for (std::size_t l = 0; l < base.size(); ++l) {
      for (std::size_t k = 0; k < base[l].data().size(); ++k) {
        worst = std::max(worst, std::abs(moved[l].data()[k] - base[l].data()[k]) / eps);
      }
    }
  }
  EXPECT_LE(worst, kFrozenBound);
  EXPECT_GT(worst, 0.0);
}

}  // namespace
