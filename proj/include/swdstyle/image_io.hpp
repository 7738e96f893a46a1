// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "swdstyle/tensors.hpp"

namespace swdstyle {

/// Loads an 8-bit PNG as a 3-channel image in [0, 1]. Gray inputs are
/// replicated, alpha is dropped. 16-bit files are rejected.
ImageBuffer load_image(const std::filesystem::path& path);

/// Loads an 8-bit single-channel PNG or binary PGM (P5) as a 1-channel image.
ImageBuffer load_gray(const std::filesystem::path& path);

/// Writes an 8-bit PNG (1 or 3 channels); values are rounded to v*255.
void save_image(const ImageBuffer& image, const std::filesystem::path& path);

/// Loads an 8-bit label image (PNG or PGM). Pixel value v becomes label v.
/// Multi-channel and 16-bit inputs are rejected with FormatError.
RegionMask load_mask(const std::filesystem::path& path);

void save_mask(const RegionMask& mask, const std::filesystem::path& path);

/// Exact 8-bit quantization used by save_image.
std::uint8_t quantize_unit(double v) noexcept;

}  // namespace swdstyle
