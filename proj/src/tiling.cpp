// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "swdstyle/attention.hpp"
#include "swdstyle/errors.hpp"
#include "swdstyle/image_io.hpp"
#include "swdstyle/parallel.hpp"
#include "swdstyle/rng.hpp"

namespace swdstyle {
namespace {

std::string dims(const ImageBuffer& b) {
  return std::to_string(b.height()) + "x" + std::to_string(b.width()) + "x" +
         std::to_string(b.channels());
}

bool same_shape(const ImageBuffer& a, const ImageBuffer& b) {
  return a.height() == b.height() && a.width() == b.width() && a.channels() == b.channels();
}

double luminance(const ImageBuffer& img, std::size_t pixel) {
  const auto px = img.data().subspan(pixel * img.channels(), img.channels());
  if (img.channels() == 1) return px[0];
  return 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
}

Eigen::MatrixXd as_matrix(const ImageBuffer& img) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(img.pixel_count()),
                    static_cast<Eigen::Index>(img.channels()));
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    for (std::size_t c = 0; c < img.channels(); ++c) {
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) =
          img.data()[p * img.channels() + c];
    }
  }
  return m;
}

constexpr const char* kImageSuffix = "_image.png";
constexpr const char* kDepthSuffix = "_depth.png";

}  // namespace

ImageBuffer tile_2x2(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer& c,
                     const ImageBuffer& d) {
  if (!same_shape(a, b) || !same_shape(a, c) || !same_shape(a, d)) {
    throw_dimension("tile_2x2: inputs differ in shape (" + dims(a) + ", " + dims(b) + ", " +
                    dims(c) + ", " + dims(d) + ")");
  }
  if (a.empty()) throw_dimension("tile_2x2: empty inputs");
  const std::size_t h = a.height();
  const std::size_t w = a.width();
  const std::size_t ch = a.channels();
  std::vector<double> out(4 * h * w * ch);
  const ImageBuffer* parts[4] = {&a, &b, &c, &d};
  for (std::size_t q = 0; q < 4; ++q) {
    const std::size_t oy = (q / 2) * h;
    const std::size_t ox = (q % 2) * w;
    const auto src = parts[q]->data();
    for (std::size_t y = 0; y < h; ++y) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(y * w * ch), w * ch,
                  out.begin() + static_cast<std::ptrdiff_t>(((oy + y) * 2 * w + ox) * ch));
    }
  }
  return ImageBuffer(2 * h, 2 * w, ch, std::move(out));
}

std::array<ImageBuffer, 4> untile_2x2(const ImageBuffer& tile) {
  if (tile.empty() || tile.height() % 2 != 0 || tile.width() % 2 != 0) {
    throw_dimension("untile_2x2: tile " + dims(tile) + " does not have even, non-zero sides");
  }
  const std::size_t h = tile.height() / 2;
  const std::size_t w = tile.width() / 2;
  const std::size_t ch = tile.channels();
  std::array<ImageBuffer, 4> out;
  const auto src = tile.data();
  for (std::size_t q = 0; q < 4; ++q) {
    const std::size_t oy = (q / 2) * h;
    const std::size_t ox = (q % 2) * w;
    std::vector<double> part(h * w * ch);
    for (std::size_t y = 0; y < h; ++y) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(((oy + y) * 2 * w + ox) * ch), w * ch,
                  part.begin() + static_cast<std::ptrdiff_t>(y * w * ch));
    }
    out[q] = ImageBuffer(h, w, ch, std::move(part));
  }
  return out;
}

ViewSet::ViewSet(std::vector<View> views) : views_(std::move(views)) {
  if (views_.empty()) throw_domain("view set is empty");
  std::set<std::string> ids;
  for (const auto& v : views_) {
    if (!ids.insert(v.id).second) throw_domain("duplicate view id '" + v.id + "'");
    if (v.depth.channels() != 1) throw_dimension("depth for view '" + v.id + "' is not single-channel");
    if (v.image.channels() != 3) throw_dimension("image for view '" + v.id + "' is not RGB");
    if (v.image.height() != v.depth.height() || v.image.width() != v.depth.width()) {
      throw_dimension("view '" + v.id + "': image " + dims(v.image) + " and depth " +
                      dims(v.depth) + " differ in size");
    }
    if (!same_shape(v.image, views_.front().image)) {
      throw_dimension("view '" + v.id + "' is " + dims(v.image) + ", expected " +
                      dims(views_.front().image));
    }
  }
}

std::array<std::size_t, 4> reference_indices(std::size_t n) {
  if (n == 0) throw_domain("reference selection needs at least one view");
  std::array<std::size_t, 4> idx{};
  for (std::size_t i = 0; i < 4; ++i) idx[i] = n >= 4 ? i * n / 4 : i % n;
  return idx;
}

std::array<ImageBuffer, 4> sample_ref_depths(const ViewSet& views) {
  const auto idx = reference_indices(views.size());
  return {views[idx[0]].depth, views[idx[1]].depth, views[idx[2]].depth, views[idx[3]].depth};
}

ImageBuffer IdentityStylizer::stylize(const StylizeRequest& request) const {
  return request.content;
}

Palette Palette::from_seed(std::uint64_t seed, double lo, double hi) {
  CounterRng rng(derive_seed({seed, 0x9A1E77EULL}));
  Palette p;
  for (auto& stop : p.stops) {
    for (auto& c : stop) c = lo + (hi - lo) * rng.uniform();
  }
  return p;
}

std::array<double, 3> Palette::operator()(double t) const {
  const double x = std::clamp(t, 0.0, 1.0) * 3.0;
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), 2);
  const double f = x - static_cast<double>(i);
  std::array<double, 3> out{};
  for (std::size_t c = 0; c < 3; ++c) out[c] = (1.0 - f) * stops[i][c] + f * stops[i + 1][c];
  return out;
}

ImageBuffer PaletteStylizer::stylize(const StylizeRequest& request) const {
  const Palette pal = Palette::from_seed(request.seed);
  const ImageBuffer& in = request.content;
  std::vector<double> out(in.pixel_count() * 3);
  for (std::size_t p = 0; p < in.pixel_count(); ++p) {
    const auto rgb = pal(luminance(in, p));
    std::copy(rgb.begin(), rgb.end(), out.begin() + static_cast<std::ptrdiff_t>(3 * p));
  }
  return ImageBuffer(in.height(), in.width(), 3, std::move(out));
}

ImageBuffer AdainStylizer::reference_colors(const ImageBuffer& reference_depth,
                                            std::uint64_t seed) {
  // Low contrast keeps the normalized output inside [0, 1] for typical tiles.
  const Palette pal = Palette::from_seed(seed, 0.35, 0.65);
  std::vector<double> out(reference_depth.pixel_count() * 3);
  for (std::size_t p = 0; p < reference_depth.pixel_count(); ++p) {
    const auto rgb = pal(luminance(reference_depth, p));
    std::copy(rgb.begin(), rgb.end(), out.begin() + static_cast<std::ptrdiff_t>(3 * p));
  }
  return ImageBuffer(reference_depth.height(), reference_depth.width(), 3, std::move(out));
}

ImageBuffer AdainStylizer::stylize(const StylizeRequest& request) const {
  const ImageBuffer ref = reference_colors(request.reference_depth, request.seed);
  const Eigen::MatrixXd y = adain(as_matrix(request.content), as_matrix(ref));
  std::vector<double> out(static_cast<std::size_t>(y.size()));
  for (Eigen::Index p = 0; p < y.rows(); ++p) {
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      out[static_cast<std::size_t>(p * y.cols() + c)] = std::clamp(y(p, c), 0.0, 1.0);
    }
  }
  return ImageBuffer(request.content.height(), request.content.width(), 3, std::move(out));
}

std::unique_ptr<Stylizer> make_stylizer(const std::string& name) {
  if (name == "identity") return std::make_unique<IdentityStylizer>();
  if (name == "palette") return std::make_unique<PaletteStylizer>();
  if (name == "adain") return std::make_unique<AdainStylizer>();
  throw_domain("unknown stylizer '" + name + "' (expected identity, palette or adain)");
}

ViewSet run_multiview_edit(const ViewSet& views, const std::string& prompt,
                           const Stylizer& stylizer, std::uint64_t seed) {
  const auto refs = sample_ref_depths(views);
  const ImageBuffer ref_tile = tile_2x2(refs[0], refs[1], refs[2], refs[3]);
  const std::size_t n = views.size();
  const std::size_t batches = (n + 3) / 4;
  std::vector<std::array<ImageBuffer, 4>> results(batches);
  parallel_for(batches, [&](std::size_t b) {
    std::array<const View*, 4> members{};
    for (std::size_t i = 0; i < 4; ++i) members[i] = &views[std::min(4 * b + i, n - 1)];
    const ImageBuffer depth = tile_2x2(members[0]->depth, members[1]->depth, members[2]->depth,
                                       members[3]->depth);
    const ImageBuffer content = tile_2x2(members[0]->image, members[1]->image,
                                         members[2]->image, members[3]->image);
    const StylizeRequest req{ref_tile, depth, content, prompt, seed, b};
    ImageBuffer styled = stylizer.stylize(req);
    if (styled.height() != content.height() || styled.width() != content.width() ||
        styled.channels() != content.channels()) {
      throw ContractError("stylizer '" + stylizer.name() + "' returned " + dims(styled) +
                          " for a " + dims(content) + " tile");
    }
    results[b] = untile_2x2(styled);
  });
  std::vector<View> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({views[i].id, std::move(results[i / 4][i % 4]), views[i].depth});
  }
  return ViewSet(std::move(out));
}

ViewSet read_view_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("view directory '" + dir.string() + "' not found");
  std::map<std::string, std::pair<bool, bool>> found;
  auto ends_with = [](const std::string& s, const std::string& suf) {
    return s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (ends_with(name, kImageSuffix)) {
      found[name.substr(0, name.size() - std::string(kImageSuffix).size())].first = true;
    } else if (ends_with(name, kDepthSuffix)) {
      found[name.substr(0, name.size() - std::string(kDepthSuffix).size())].second = true;
    }
  }
  if (found.empty()) throw_domain("no '<id>" + std::string(kImageSuffix) + "' files in '" + dir.string() + "'");
  std::string missing;
  for (const auto& [id, has] : found) {
    if (!has.first || !has.second) missing += (missing.empty() ? "" : ", ") + id;
  }
  if (!missing.empty()) throw_domain("views without an image/depth pair: " + missing);
  std::vector<View> views;
  for (const auto& [id, has] : found) {
    views.push_back({id, load_image(dir / (id + kImageSuffix)), load_gray(dir / (id + kDepthSuffix))});
  }
  return ViewSet(std::move(views));
}

void write_view_outputs(const ViewSet& outputs, const std::filesystem::path& input_dir,
                        const std::filesystem::path& out_dir, const std::string& prompt,
                        std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  std::ofstream manifest(out_dir / "manifest.txt", std::ios::binary);
  if (!manifest) throw IoError("cannot write manifest in '" + out_dir.string() + "'");
  for (const auto& v : outputs.views()) {
    const auto out_path = out_dir / (v.id + "_stylized.png");
    save_image(v.image, out_path);
    manifest << v.id << '\t' << (input_dir / (v.id + kImageSuffix)).string() << '\t'
             << out_path.string() << '\t' << prompt << '\t' << seed << '\n';
  }
  if (!manifest) throw IoError("failed writing manifest in '" + out_dir.string() + "'");
}

}  // namespace swdstyle
