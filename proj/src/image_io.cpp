// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "swdstyle/errors.hpp"

namespace swdstyle {
namespace {

struct RawRaster {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<std::uint8_t> bytes;
};

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

bool is_pgm(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5';
}

// `single_channel`: reject colour inputs instead of converting them.
RawRaster decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name,
                     bool single_channel) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw FormatError("PNG '" + name + "': " + image.message);
  }
  const auto native = image.format;
  const bool color = (native & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (native & PNG_FORMAT_FLAG_ALPHA) != 0;
  if ((native & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&image);
    throw FormatError("PNG '" + name + "': 16-bit images are not supported");
  }
  if (single_channel && (color || alpha)) {
    png_image_free(&image);
    throw FormatError("PNG '" + name + "': expected a single-channel 8-bit image");
  }
  RawRaster raster;
  raster.height = image.height;
  raster.width = image.width;
  if (single_channel) {
    image.format = PNG_FORMAT_GRAY;
    raster.channels = 1;
  } else {
    image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    raster.channels = alpha ? 4 : 3;
  }
  raster.bytes.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.bytes.data(), 0, nullptr)) {
    throw FormatError("PNG '" + name + "': " + image.message);
  }
  if (raster.channels == 4) {
    std::vector<std::uint8_t> rgb(raster.height * raster.width * 3);
    for (std::size_t i = 0; i < raster.height * raster.width; ++i) {
      std::memcpy(&rgb[3 * i], &raster.bytes[4 * i], 3);
    }
    raster.bytes = std::move(rgb);
    raster.channels = 3;
  }
  return raster;
}

RawRaster decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    if (tok.empty()) throw FormatError("PGM '" + name + "': malformed header");
    return std::stol(tok);
  };
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (width <= 0 || height <= 0) throw FormatError("PGM '" + name + "': empty image");
  if (maxval > 255) throw FormatError("PGM '" + name + "': 16-bit images are not supported");
  if (maxval <= 0) throw FormatError("PGM '" + name + "': bad maxval");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw FormatError("PGM '" + name + "': malformed header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < n) throw FormatError("PGM '" + name + "': truncated payload");
  RawRaster raster;
  raster.height = static_cast<std::size_t>(height);
  raster.width = static_cast<std::size_t>(width);
  raster.channels = 1;
  raster.bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return raster;
}

RawRaster read_raster(const std::filesystem::path& path, bool single_channel) {
  const auto bytes = read_all(path);
  const std::string name = path.string();
  if (is_png(bytes)) return decode_png(bytes, name, single_channel);
  if (is_pgm(bytes)) {
    auto raster = decode_pgm(bytes, name);
    if (!single_channel) {
      std::vector<std::uint8_t> rgb(raster.bytes.size() * 3);
      for (std::size_t i = 0; i < raster.bytes.size(); ++i) {
        rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = raster.bytes[i];
      }
      raster.bytes = std::move(rgb);
      raster.channels = 3;
    }
    return raster;
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '3')) {
    throw FormatError("'" + name + "': multi-channel PNM is not supported");
  }
  throw FormatError("'" + name + "': not a PNG or binary PGM file");
}

ImageBuffer to_image(const RawRaster& raster) {
  std::vector<double> data(raster.bytes.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = raster.bytes[i] / 255.0;
  return ImageBuffer(raster.height, raster.width, raster.channels, std::move(data));
}

void write_png(const std::filesystem::path& path, std::size_t height, std::size_t width,
               std::size_t channels, const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

}  // namespace

std::uint8_t quantize_unit(double v) noexcept {
  const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

ImageBuffer load_image(const std::filesystem::path& path) {
  return to_image(read_raster(path, false));
}

ImageBuffer load_gray(const std::filesystem::path& path) {
  return to_image(read_raster(path, true));
}

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw DimensionError("save_image supports 1 or 3 channels");
  }
  std::vector<std::uint8_t> bytes(image.data().size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize_unit(image.data()[i]);
  write_png(path, image.height(), image.width(), image.channels(), bytes);
}

RegionMask load_mask(const std::filesystem::path& path) {
  auto raster = read_raster(path, true);
  return RegionMask(raster.height, raster.width, std::move(raster.bytes));
}

void save_mask(const RegionMask& mask, const std::filesystem::path& path) {
  write_png(path, mask.height(), mask.width(), 1,
            std::vector<std::uint8_t>(mask.labels().begin(), mask.labels().end()));
}

}  // namespace swdstyle
