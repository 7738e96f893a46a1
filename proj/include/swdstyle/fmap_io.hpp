// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "swdstyle/tensors.hpp"

namespace swdstyle {

// FMAP layout (all little-endian):
//   8 bytes  magic "FMAPv001"
//   u32      rank (always 4)
//   u32 x 4  layer_id, channels, height, width
//   f32 x M*N values, pixel-major / channel-minor
inline constexpr std::string_view kFmapMagic = "FMAPv001";
inline constexpr std::uint32_t kFmapRank = 4;

/// Serializes `map`. Values are rounded to binary32; a value that overflows
/// binary32 is rejected with DomainError.
std::vector<std::uint8_t> encode_fmap(const FeatureMap& map);
FeatureMap decode_fmap(const std::vector<std::uint8_t>& bytes);

void write_fmap(const FeatureMap& map, const std::filesystem::path& path);
FeatureMap read_fmap(const std::filesystem::path& path);

}  // namespace swdstyle
