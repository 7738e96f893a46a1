// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/fmap_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "swdstyle/errors.hpp"

namespace swdstyle {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

constexpr std::size_t kHeaderBytes = 8 + 4 + 4 * kFmapRank;

}  // namespace

std::vector<std::uint8_t> encode_fmap(const FeatureMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * map.data().size());
  out.insert(out.end(), kFmapMagic.begin(), kFmapMagic.end());
  put_u32(out, kFmapRank);
  put_u32(out, static_cast<std::uint32_t>(map.layer_id()));
  put_u32(out, static_cast<std::uint32_t>(map.channels()));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  for (double v : map.data()) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      throw DomainError("feature value " + std::to_string(v) + " is not representable as f32");
    }
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

FeatureMap decode_fmap(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw FormatError("FMAP: file shorter than magic");
  const std::string_view magic(reinterpret_cast<const char*>(bytes.data()), 8);
  if (magic != kFmapMagic) {
    if (magic.substr(0, 5) == "FMAPv") {
      throw FormatError("FMAP: unsupported version '" + std::string(magic.substr(5)) + "'");
    }
    throw FormatError("FMAP: bad magic");
  }
  if (bytes.size() < 12) throw FormatError("FMAP: truncated header");
  const std::uint32_t rank = get_u32(bytes.data() + 8);
  if (rank != kFmapRank) {
    throw FormatError("FMAP: expected rank 4, got " + std::to_string(rank));
  }
  if (bytes.size() < kHeaderBytes) throw FormatError("FMAP: truncated header");
  const std::uint32_t layer_id = get_u32(bytes.data() + 12);
  const std::uint64_t channels = get_u32(bytes.data() + 16);
  const std::uint64_t height = get_u32(bytes.data() + 20);
  const std::uint64_t width = get_u32(bytes.data() + 24);
  if (channels == 0 || height == 0 || width == 0) {
    throw FormatError("FMAP: zero-sized dimension");
  }
  const std::uint64_t count = channels * height * width;
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (payload < 4 * count) {
    throw FormatError("FMAP: truncated payload (" + std::to_string(payload) + " of " +
                      std::to_string(4 * count) + " bytes)");
  }
  if (payload != 4 * count) {
    throw FormatError("FMAP: dimensions inconsistent with payload size");
  }
  std::vector<double> data(count);
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::uint64_t i = 0; i < count; ++i, p += 4) {
    const float f = std::bit_cast<float>(get_u32(p));
    if (!std::isfinite(f)) throw FormatError("FMAP: non-finite value in payload");
    data[i] = f;
  }
  if (layer_id > static_cast<std::uint32_t>(INT32_MAX)) {
    throw FormatError("FMAP: layer id out of range");
  }
  return FeatureMap(static_cast<int>(layer_id), channels, height, width, std::move(data));
}

void write_fmap(const FeatureMap& map, const std::filesystem::path& path) {
  const auto bytes = encode_fmap(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

FeatureMap read_fmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_fmap(bytes);
}

}  // namespace swdstyle
