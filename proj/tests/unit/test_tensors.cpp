// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "swdstyle/errors.hpp"
#include "swdstyle/fmap_io.hpp"
#include "swdstyle/image_io.hpp"
#include "swdstyle/tensors.hpp"

namespace {

using namespace swdstyle;

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(ImageBuffer, ValidatesShapeAndRange) {
  EXPECT_THROW(ImageBuffer(2, 2, 3, std::vector<double>(11, 0.0)), DimensionError);
  EXPECT_THROW(ImageBuffer(1, 1, 1, {1.5}), DomainError);
  EXPECT_THROW(ImageBuffer(1, 1, 1, {std::nan("")}), DomainError);
  const ImageBuffer img(1, 2, 1, {0.0, 1.0});
  EXPECT_EQ(img.at(0, 1, 0), 1.0);
}

TEST(FeatureMap, RejectsNonFiniteAndEmpty) {
  EXPECT_THROW(FeatureMap(1, 1, 1, 1, {std::numeric_limits<double>::infinity()}), DomainError);
  EXPECT_THROW(FeatureMap(1, 0, 1, 1, {}), DimensionError);
  EXPECT_THROW(FeatureMap(1, 2, 1, 1, {1.0}), DimensionError);
}

TEST(FeatureMap, ImageConversionIsLossless) {
  std::mt19937_64 rng(1);
  const ImageBuffer img = fixtures::random_image(rng, 5, 7);
  const FeatureMap map = image_to_feature_map(img);
  EXPECT_EQ(map.channels(), 3u);
  EXPECT_EQ(map.pixel_count(), 35u);
  EXPECT_EQ(feature_map_to_image(map), img);
}

TEST(Fmap, SmallestFileIs32Bytes) {
  const auto dir = fixtures::temp_dir("fmap_small");
  write_fmap(FeatureMap(1, 1, 1, 1, {0.5}), dir / "a.fmap");
  const auto bytes = read_bytes(dir / "a.fmap");
  ASSERT_EQ(bytes.size(), 32u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "FMAPv001");
  // 0.5f little-endian.
  EXPECT_EQ(bytes[28], 0x00);
  EXPECT_EQ(bytes[31], 0x3f);
  EXPECT_EQ(read_fmap(dir / "a.fmap").data()[0], 0.5);
}

TEST(Fmap, RewriteIsByteIdentical) {
  std::mt19937_64 rng(2);
  const auto dir = fixtures::temp_dir("fmap_rt");
  const FeatureMap map = fixtures::random_map(rng, 5, 8, 4, 4);
  write_fmap(map, dir / "a.fmap");
  const FeatureMap back = read_fmap(dir / "a.fmap");
  EXPECT_EQ(back.layer_id(), 5);
  EXPECT_EQ(back.channels(), 8u);
  EXPECT_EQ(back.height(), 4u);
  write_fmap(back, dir / "b.fmap");
  EXPECT_EQ(read_bytes(dir / "a.fmap"), read_bytes(dir / "b.fmap"));
  // f32-representable values survive exactly.
  EXPECT_EQ(read_fmap(dir / "b.fmap"), back);
  for (std::size_t i = 0; i < map.data().size(); ++i) {
    EXPECT_EQ(back.data()[i], static_cast<double>(static_cast<float>(map.data()[i])));
  }
}

TEST(Fmap, RejectsMalformedFiles) {
  auto bytes = encode_fmap(FeatureMap(2, 2, 1, 2, {1, 2, 3, 4}));
  auto bad = bytes;
  bad[7] = '0';  // FMAPv000
  try {
    decode_fmap(bad);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
  bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_fmap(bad), FormatError);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(decode_fmap(bad), FormatError);
  bad = bytes;
  bad.push_back(0);
  try {
    decode_fmap(bad);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("inconsistent"), std::string::npos);
  }
  bad = bytes;
  bad[8] = 3;  // rank 3
  EXPECT_THROW(decode_fmap(bad), FormatError);
  EXPECT_THROW(encode_fmap(FeatureMap(1, 1, 1, 1, {1e300})), DomainError);
}

TEST(Mask, LabelCountsFromFiles) {
  const auto dir = fixtures::temp_dir("masks");
  save_mask(RegionMask(2, 2, {0, 0, 0, 0}), dir / "zero.png");
  save_mask(RegionMask(2, 2, {0, 1, 1, 0}), dir / "bin.png");
  const RegionMask zero = load_mask(dir / "zero.png");
  EXPECT_EQ(zero.max_label(), 0);
  EXPECT_EQ(zero.present_labels(), std::vector<int>{0});
  const RegionMask bin = load_mask(dir / "bin.png");
  EXPECT_EQ(bin.max_label(), 1);
  EXPECT_EQ(bin.present_labels(), (std::vector<int>{0, 1}));
  const RegionMask three = load_mask(std::filesystem::path(SWDSTYLE_TEST_DATA) / "mask_3label.pgm");
  EXPECT_EQ(three.max_label(), 2);
  EXPECT_EQ(three.height(), 3u);
  EXPECT_EQ(three.at(1, 1), 2);
}

TEST(Mask, RejectsColourAnd16Bit) {
  const std::filesystem::path data(SWDSTYLE_TEST_DATA);
  EXPECT_THROW(load_mask(data / "mask_rgb.png"), FormatError);
  EXPECT_THROW(load_mask(data / "mask_16bit.png"), FormatError);
}

TEST(Image, PngRoundTrip) {
  std::mt19937_64 rng(3);
  const auto dir = fixtures::temp_dir("png");
  const ImageBuffer img = fixtures::random_image_8bit(rng, 6, 5);
  save_image(img, dir / "a.png");
  EXPECT_EQ(load_image(dir / "a.png"), img);
  EXPECT_THROW(load_image(dir / "missing.png"), IoError);
}

TEST(DownsampleMask, IdentityAndChecker) {
  const RegionMask m(4, 4, {0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0});
  EXPECT_EQ(downsample_mask(m, 4, 4), m);
  const RegionMask d = downsample_mask(m, 2, 2);
  for (auto l : d.labels()) EXPECT_TRUE(l == 0 || l == 1);
  EXPECT_THROW(downsample_mask(m, 0, 2), DimensionError);
  EXPECT_THROW(downsample_mask(m, 5, 2), DimensionError);
}

TEST(DownsampleMask, MatchesDirectIndexMapping) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> lab(0, 4);
  for (auto [H, W, h, w] : std::vector<std::array<std::size_t, 4>>{
           {5, 5, 2, 2}, {7, 3, 3, 2}, {32, 32, 4, 4}, {17, 9, 8, 4}, {6, 6, 6, 1}}) {
    std::vector<std::uint8_t> labels(H * W);
    for (auto& l : labels) l = static_cast<std::uint8_t>(lab(rng));
    const RegionMask m(H, W, labels);
    const RegionMask d = downsample_mask(m, h, w);
    std::set<int> src(m.labels().begin(), m.labels().end());
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        EXPECT_EQ(d.at(y, x), m.at(oracle::centre_index(y, H, h), oracle::centre_index(x, W, w)));
        EXPECT_TRUE(src.count(d.at(y, x)));
      }
    }
  }
}

}  // namespace
