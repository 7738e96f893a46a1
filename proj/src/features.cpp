// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/features.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "swdstyle/errors.hpp"
#include "swdstyle/fmap_io.hpp"
#include "swdstyle/rng.hpp"

namespace swdstyle {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kInputOffset = 0.5;

std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto nn = static_cast<std::ptrdiff_t>(n);
  if (i < 0) i = -i;
  if (i >= nn) i = 2 * nn - 2 - i;
  return static_cast<std::size_t>(i);
}

// Row m of the result holds the 3x3 reflect-padded neighbourhood of pixel m,
// ordered (dy, dx, channel).
RowMatrix im2col(const double* input, std::size_t h, std::size_t w, std::size_t c) {
  RowMatrix patches(static_cast<Eigen::Index>(h * w), static_cast<Eigen::Index>(9 * c));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double* row = patches.data() + (y * w + x) * 9 * c;
      for (int dy = 0; dy < 3; ++dy) {
        const std::size_t sy = reflect(static_cast<std::ptrdiff_t>(y) + dy - 1, h);
        for (int dx = 0; dx < 3; ++dx) {
          const std::size_t sx = reflect(static_cast<std::ptrdiff_t>(x) + dx - 1, w);
          const double* src = input + (sy * w + sx) * c;
          std::copy(src, src + c, row + (dy * 3 + dx) * c);
        }
      }
    }
  }
  return patches;
}

void col2im_add(const RowMatrix& dpatches, std::size_t h, std::size_t w, std::size_t c,
                double* dinput) {
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double* row = dpatches.data() + (y * w + x) * 9 * c;
      for (int dy = 0; dy < 3; ++dy) {
        const std::size_t sy = reflect(static_cast<std::ptrdiff_t>(y) + dy - 1, h);
        for (int dx = 0; dx < 3; ++dx) {
          const std::size_t sx = reflect(static_cast<std::ptrdiff_t>(x) + dx - 1, w);
          double* dst = dinput + (sy * w + sx) * c;
          const double* g = row + (dy * 3 + dx) * c;
          for (std::size_t k = 0; k < c; ++k) dst[k] += g[k];
        }
      }
    }
  }
}

RowMatrix avg_pool(const RowMatrix& a, std::size_t h, std::size_t w) {
  const std::size_t h2 = h / 2;
  const std::size_t w2 = w / 2;
  const auto c = a.cols();
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(h2 * w2), c);
  for (std::size_t y = 0; y < h2; ++y) {
    for (std::size_t x = 0; x < w2; ++x) {
      auto dst = out.row(static_cast<Eigen::Index>(y * w2 + x));
      dst = 0.25 * (a.row(static_cast<Eigen::Index>((2 * y) * w + 2 * x)) +
                    a.row(static_cast<Eigen::Index>((2 * y) * w + 2 * x + 1)) +
                    a.row(static_cast<Eigen::Index>((2 * y + 1) * w + 2 * x)) +
                    a.row(static_cast<Eigen::Index>((2 * y + 1) * w + 2 * x + 1)));
    }
  }
  return out;
}

// Adjoint of avg_pool; rows/columns cropped by the floor are left untouched.
void avg_unpool_add(const RowMatrix& g, std::size_t h, std::size_t w, RowMatrix& out) {
  const std::size_t h2 = h / 2;
  const std::size_t w2 = w / 2;
  for (std::size_t y = 0; y < h2; ++y) {
    for (std::size_t x = 0; x < w2; ++x) {
      const auto src = 0.25 * g.row(static_cast<Eigen::Index>(y * w2 + x));
      out.row(static_cast<Eigen::Index>((2 * y) * w + 2 * x)) += src;
      out.row(static_cast<Eigen::Index>((2 * y) * w + 2 * x + 1)) += src;
      out.row(static_cast<Eigen::Index>((2 * y + 1) * w + 2 * x)) += src;
      out.row(static_cast<Eigen::Index>((2 * y + 1) * w + 2 * x + 1)) += src;
    }
  }
}

FeatureMap to_map(int layer_id, const RowMatrix& m, std::size_t h, std::size_t w) {
  return FeatureMap(layer_id, static_cast<std::size_t>(m.cols()), h, w,
                    std::vector<double>(m.data(), m.data() + m.size()));
}

RowMatrix orthogonal_filters(std::size_t cout, std::size_t fan_in, double gain,
                             std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(cout), static_cast<Eigen::Index>(fan_in));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  }
  if (cout <= fan_in) {
    // Orthonormal rows.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.transpose());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.cols(), g.rows());
    const Eigen::MatrixXd r = qr.matrixQR().topRows(g.rows()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    return gain * q.transpose();
  }
  // Orthonormal columns, rescaled so rows have unit norm on average.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  const Eigen::MatrixXd r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  const double scale = std::sqrt(static_cast<double>(cout) / static_cast<double>(fan_in));
  return gain * scale * q;
}

}  // namespace

struct FeatureExtractor::Filters {
  std::array<RowMatrix, ExtractorSpec::kStages> weights;  // cout x 9 cin
};

struct FeatureExtractor::Trace {
  struct Stage {
    std::size_t h = 0, w = 0, cin = 0, cout = 0;
    RowMatrix patches;  // (h w) x (9 cin)
    RowMatrix pre;      // (h w) x cout, before the rectifier
  };
  std::size_t height = 0;
  std::size_t width = 0;
  std::array<Stage, ExtractorSpec::kStages> stages;
  std::vector<FeatureMap> taps;
};

std::vector<LayerShape> tap_shapes(const ExtractorSpec& spec, std::size_t height,
                                   std::size_t width) {
  std::vector<LayerShape> out;
  std::size_t h = height;
  std::size_t w = width;
  for (std::size_t s = 0; s < ExtractorSpec::kStages; ++s) {
    out.push_back({static_cast<int>(2 * s + 1), spec.widths[s], h, w});
    out.push_back({static_cast<int>(2 * s + 2), spec.widths[s], h / 2, w / 2});
    h /= 2;
    w /= 2;
  }
  return out;
}

FeatureExtractor::FeatureExtractor(ExtractorSpec spec)
    : spec_(spec), filters_(std::make_unique<Filters>()) {
  if (!(spec_.slope > 0.0 && spec_.slope < 1.0)) throw_domain("leaky slope must lie in (0, 1)");
  if (spec_.min_side < 16) throw_domain("extractor needs a minimum side of at least 16");
  const double gain = std::sqrt(2.0 / (1.0 + spec_.slope * spec_.slope));
  std::size_t cin = 3;
  for (std::size_t s = 0; s < ExtractorSpec::kStages; ++s) {
    if (spec_.widths[s] == 0) throw_domain("stage width must be >= 1");
    filters_->weights[s] = orthogonal_filters(spec_.widths[s], 9 * cin, gain,
                                              derive_seed({spec_.seed, s}));
    cin = spec_.widths[s];
  }
}

FeatureExtractor::~FeatureExtractor() = default;
FeatureExtractor::FeatureExtractor(FeatureExtractor&&) noexcept = default;
FeatureExtractor& FeatureExtractor::operator=(FeatureExtractor&&) noexcept = default;

FeatureExtractor::TracePtr FeatureExtractor::forward(const ImageBuffer& image) const {
  if (image.channels() != 3) throw_dimension("extractor expects a 3-channel image");
  if (image.height() < spec_.min_side || image.width() < spec_.min_side) {
    throw_dimension("image " + std::to_string(image.height()) + "x" +
                    std::to_string(image.width()) + " is smaller than the extractor minimum " +
                    std::to_string(spec_.min_side) + "x" + std::to_string(spec_.min_side));
  }
  TracePtr trace(new Trace);
  trace->height = image.height();
  trace->width = image.width();
  std::vector<double> input(image.data().begin(), image.data().end());
  for (double& v : input) v -= kInputOffset;

  std::size_t h = image.height();
  std::size_t w = image.width();
  std::size_t cin = 3;
  for (std::size_t s = 0; s < ExtractorSpec::kStages; ++s) {
    auto& st = trace->stages[s];
    st.h = h;
    st.w = w;
    st.cin = cin;
    st.cout = spec_.widths[s];
    st.patches = im2col(input.data(), h, w, cin);
    st.pre.noalias() = st.patches * filters_->weights[s].transpose();
    RowMatrix act = st.pre.unaryExpr([slope = spec_.slope](double z) { return z > 0 ? z : slope * z; });
    RowMatrix pooled = avg_pool(act, h, w);
    trace->taps.push_back(to_map(static_cast<int>(2 * s + 1), act, h, w));
    trace->taps.push_back(to_map(static_cast<int>(2 * s + 2), pooled, h / 2, w / 2));
    input.assign(pooled.data(), pooled.data() + pooled.size());
    h /= 2;
    w /= 2;
    cin = st.cout;
  }
  return trace;
}

void FeatureExtractor::TraceDeleter::operator()(Trace* t) const noexcept { delete t; }

const std::vector<FeatureMap>& FeatureExtractor::taps(const Trace& trace) { return trace.taps; }

std::vector<FeatureMap> FeatureExtractor::extract(const ImageBuffer& image) const {
  return std::move(forward(image)->taps);
}

std::vector<double> FeatureExtractor::backprop(const Trace& trace,
                                               std::span<const GradientBuffer> tap_gradients) const {
  if (tap_gradients.size() != trace.taps.size()) {
    throw_dimension("backprop: expected " + std::to_string(trace.taps.size()) +
                    " tap gradients, got " + std::to_string(tap_gradients.size()));
  }
  for (std::size_t i = 0; i < tap_gradients.size(); ++i) {
    const auto& g = tap_gradients[i];
    const auto& t = trace.taps[i];
    if (g.channels != t.channels() || g.height != t.height() || g.width != t.width() ||
        g.data.size() != t.data().size()) {
      throw_dimension("backprop: gradient shape mismatch at tap " + std::to_string(i + 1));
    }
  }
  // Gradient arriving at the pooled output of the current stage from deeper
  // stages (empty for the last stage).
  RowMatrix downstream;
  for (std::size_t si = ExtractorSpec::kStages; si-- > 0;) {
    const auto& st = trace.stages[si];
    const auto rows_pre = static_cast<Eigen::Index>(st.h * st.w);
    const auto rows_post = static_cast<Eigen::Index>((st.h / 2) * (st.w / 2));
    const auto cols = static_cast<Eigen::Index>(st.cout);
    RowMatrix d_pooled = Eigen::Map<const RowMatrix>(tap_gradients[2 * si + 1].data.data(),
                                                     rows_post, cols);
    if (downstream.size() > 0) d_pooled += downstream;
    RowMatrix d_act = Eigen::Map<const RowMatrix>(tap_gradients[2 * si].data.data(), rows_pre, cols);
    avg_unpool_add(d_pooled, st.h, st.w, d_act);
    const double slope = spec_.slope;
    RowMatrix d_pre = d_act.binaryExpr(st.pre, [slope](double g, double z) { return z > 0 ? g : slope * g; });
    RowMatrix d_patches = d_pre * filters_->weights[si];
    RowMatrix d_input = RowMatrix::Zero(rows_pre, static_cast<Eigen::Index>(st.cin));
    col2im_add(d_patches, st.h, st.w, st.cin, d_input.data());
    downstream = std::move(d_input);
  }
  return std::vector<double>(downstream.data(), downstream.data() + downstream.size());
}

std::vector<std::vector<double>> FeatureExtractor::jvp(const ImageBuffer& image,
                                                       std::span<const double> direction) const {
  if (direction.size() != image.data().size()) throw_dimension("jvp: direction size mismatch");
  const auto trace = forward(image);
  std::vector<std::vector<double>> out;
  std::vector<double> tangent(direction.begin(), direction.end());
  for (std::size_t s = 0; s < ExtractorSpec::kStages; ++s) {
    const auto& st = trace->stages[s];
    RowMatrix d_patches = im2col(tangent.data(), st.h, st.w, st.cin);
    RowMatrix d_pre = d_patches * filters_->weights[s].transpose();
    const double slope = spec_.slope;
    RowMatrix d_act = d_pre.binaryExpr(st.pre, [slope](double d, double z) { return z > 0 ? d : slope * d; });
    RowMatrix d_pooled = avg_pool(d_act, st.h, st.w);
    out.emplace_back(d_act.data(), d_act.data() + d_act.size());
    out.emplace_back(d_pooled.data(), d_pooled.data() + d_pooled.size());
    tangent.assign(d_pooled.data(), d_pooled.data() + d_pooled.size());
  }
  return out;
}

std::vector<FeatureMap> extract(const ImageBuffer& image, const ExtractorSpec& spec) {
  return FeatureExtractor(spec).extract(image);
}

std::vector<double> backprop(const ImageBuffer& image, const ExtractorSpec& spec,
                             std::span<const GradientBuffer> tap_gradients) {
  FeatureExtractor ex(spec);
  const auto trace = ex.forward(image);
  return ex.backprop(*trace, tap_gradients);
}

std::vector<FeatureMap> load_external_features(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw_domain("no feature files given");
  std::vector<FeatureMap> layers;
  layers.reserve(paths.size());
  for (const auto& p : paths) {
    FeatureMap map = read_fmap(p);
    if (!layers.empty() && map.layer_id() <= layers.back().layer_id()) {
      throw_domain("feature file '" + p.string() + "' has layer id " +
                   std::to_string(map.layer_id()) + ", not greater than the previous " +
                   std::to_string(layers.back().layer_id()));
    }
    layers.push_back(std::move(map));
  }
  return layers;
}

std::vector<std::size_t> projection_schedule(std::span<const FeatureMap> layers, double fraction) {
  std::vector<std::size_t> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back(projection_budget(l.channels(), fraction));
  return out;
}

}  // namespace swdstyle
