// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "swdstyle/tensors.hpp"

namespace swdstyle {

/// a | b over c | d. All four must share height, width and channels.
ImageBuffer tile_2x2(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer& c,
                     const ImageBuffer& d);
/// Inverse of tile_2x2; needs even height and width.
std::array<ImageBuffer, 4> untile_2x2(const ImageBuffer& tile);

struct View {
  std::string id;
  ImageBuffer image;  // 3 channels
  ImageBuffer depth;  // 1 channel, same height and width as image
};

/// Ordered, non-empty views with unique ids and uniform dimensions.
class ViewSet {
 public:
  explicit ViewSet(std::vector<View> views);

  std::size_t size() const noexcept { return views_.size(); }
  const View& operator[](std::size_t i) const { return views_[i]; }
  const std::vector<View>& views() const noexcept { return views_; }

 private:
  std::vector<View> views_;
};

/// View positions used for the reference depth tile: floor(i n / 4) for
/// n >= 4; for n < 4 the views are cycled (n = 2 gives 0, 1, 0, 1).
std::array<std::size_t, 4> reference_indices(std::size_t n);
std::array<ImageBuffer, 4> sample_ref_depths(const ViewSet& views);

struct StylizeRequest {
  const ImageBuffer& reference_depth;  // 2H x 2W x 1
  const ImageBuffer& depth;            // 2H x 2W x 1
  const ImageBuffer& content;          // 2H x 2W x 3
  const std::string& prompt;
  std::uint64_t seed = 0;
  std::size_t batch = 0;
};

/// Stand-in for the depth-conditioned image generator. Implementations must
/// return an image with the dimensions of `content`, deterministically for a
/// given request, and be callable concurrently.
class Stylizer {
 public:
  virtual ~Stylizer() = default;
  virtual ImageBuffer stylize(const StylizeRequest& request) const = 0;
  virtual std::string name() const = 0;
};

/// Returns the content tile unchanged.
class IdentityStylizer final : public Stylizer {
 public:
  ImageBuffer stylize(const StylizeRequest& request) const override;
  std::string name() const override { return "identity"; }
};

/// Four colours drawn from the seed; a value t in [0, 1] maps piecewise
/// linearly across them. Colour channels lie in [lo, hi].
struct Palette {
  std::array<std::array<double, 3>, 4> stops{};
  static Palette from_seed(std::uint64_t seed, double lo = 0.0, double hi = 1.0);
  std::array<double, 3> operator()(double t) const;
};

/// Recolours the content tile by luminance through a seeded palette.
class PaletteStylizer final : public Stylizer {
 public:
  ImageBuffer stylize(const StylizeRequest& request) const override;
  std::string name() const override { return "palette"; }
};

/// Colours the reference depth tile through a low-contrast seeded palette and
/// AdaIN-normalizes each channel of the content tile to it, so every output
/// tile carries the reference tile's colour statistics.
class AdainStylizer final : public Stylizer {
 public:
  ImageBuffer stylize(const StylizeRequest& request) const override;
  std::string name() const override { return "adain"; }

  static ImageBuffer reference_colors(const ImageBuffer& reference_depth, std::uint64_t seed);
};

/// identity | palette | adain.
std::unique_ptr<Stylizer> make_stylizer(const std::string& name);

/// Multi-view editing with a tiled depth reference: the reference tile is
/// built once from four sampled depths, then views are processed four at a
/// time (the last batch padded by repeating the last view), tiled, stylized,
/// untiled and unpadded. Output order and ids follow the input; depths are
/// passed through.
ViewSet run_multiview_edit(const ViewSet& views, const std::string& prompt,
                           const Stylizer& stylizer, std::uint64_t seed);

/// Loads `<id>_image.png` / `<id>_depth.png` pairs, sorted by id. Unpaired
/// files raise DomainError naming every offending id.
ViewSet read_view_dir(const std::filesystem::path& dir);

/// Writes `<id>_stylized.png` per view and manifest.txt with tab-separated
/// lines: view_id, input path, output path, prompt, seed.
void write_view_outputs(const ViewSet& outputs, const std::filesystem::path& input_dir,
                        const std::filesystem::path& out_dir, const std::string& prompt,
                        std::uint64_t seed);

}  // namespace swdstyle
