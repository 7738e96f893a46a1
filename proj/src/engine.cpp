// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "swdstyle/errors.hpp"
#include "swdstyle/numfmt.hpp"
#include "swdstyle/rng.hpp"

namespace swdstyle {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<LayerShape> layout_of(std::span<const FeatureMap> maps) {
  std::vector<LayerShape> out;
  for (const auto& m : maps) out.push_back(LayerShape::of(m));
  return out;
}

bool excluded(const LossConfig& cfg, int label) {
  return cfg.exclude_label && *cfg.exclude_label == label;
}

std::vector<ProjectionSet> full_budget(std::span<const FeatureMap> layers, std::uint64_t seed) {
  std::vector<ProjectionSet> out;
  for (const auto& l : layers) {
    out.push_back(sample_projections(l.channels(), l.channels(),
                                     derive_seed({seed, static_cast<std::uint64_t>(l.layer_id())})));
  }
  return out;
}

// Rows of `map` whose pixel carries `label` in the mask resampled to the map.
FeatureMap region_rows(const FeatureMap& map, const RegionMask& mask, int label) {
  const RegionMask m = downsample_mask(mask, map.height(), map.width());
  std::vector<double> rows;
  std::size_t count = 0;
  for (std::size_t p = 0; p < map.pixel_count(); ++p) {
    if (m.labels()[p] != label) continue;
    const auto r = map.row(p);
    rows.insert(rows.end(), r.begin(), r.end());
    ++count;
  }
  if (count == 0) {
    throw_domain("label " + std::to_string(label) + " vanishes at layer " +
                 std::to_string(map.layer_id()));
  }
  return FeatureMap(map.layer_id(), map.channels(), count, 1, std::move(rows));
}

}  // namespace

void StylizeJob::validate() const {
  loss.validate();
  if (content.empty()) throw_domain("stylize: no content image");
  if (content.channels() != 3) throw_dimension("stylize: content must be RGB");
  if (styles.empty()) throw_domain("stylize: at least one style image is required");
  for (const auto& s : styles) {
    if (s.channels() != 3) throw_dimension("stylize: style images must be RGB");
  }
  if (iterations < 1) throw_domain("stylize: iterations must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw_domain("stylize: learning rate must be > 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(adam_epsilon > 0.0)) {
    throw_domain("stylize: optimizer moments must lie in [0, 1) and epsilon be > 0");
  }
  if (content_mask && (content_mask->height() != content.height() ||
                       content_mask->width() != content.width())) {
    throw_dimension("stylize: content mask is " + std::to_string(content_mask->height()) + "x" +
                    std::to_string(content_mask->width()) + ", content is " +
                    std::to_string(content.height()) + "x" + std::to_string(content.width()));
  }
  if (style_mask) {
    if (styles.size() != 1) throw_domain("stylize: a style mask needs exactly one style image");
    if (!content_mask) throw_domain("stylize: a style mask needs a content mask");
    if (style_mask->height() != styles[0].height() || style_mask->width() != styles[0].width()) {
      throw_dimension("stylize: style mask does not match the style image size");
    }
  }
  if (loss.exclude_label && !content_mask) {
    throw_domain("stylize: an excluded label needs a content mask");
  }
  if (styles.size() > 1 && !content_mask) {
    throw_domain("stylize: several styles need a content mask to assign them to regions");
  }
}

StyleSpec build_style_spec(const StylizeJob& job, const FeatureExtractor& extractor) {
  job.validate();
  StyleSpec spec;
  for (const auto& s : job.styles) spec.targets.push_back({extractor.extract(s), std::nullopt});
  if (!job.content_mask) return spec;

  spec.source_mask = *job.content_mask;
  std::vector<int> labels;
  for (int l : job.content_mask->present_labels()) {
    if (!excluded(job.loss, l)) labels.push_back(l);
  }
  if (labels.empty()) throw_domain("stylize: every content label is excluded");
  if (job.styles.size() > 1) {
    if (labels.size() != job.styles.size()) {
      throw_domain("stylize: " + std::to_string(job.styles.size()) + " styles given for " +
                   std::to_string(labels.size()) + " non-excluded mask labels");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      spec.regions.push_back({labels[i], i, std::nullopt});
    }
  } else if (job.style_mask) {
    spec.targets[0].mask = *job.style_mask;
    for (int l : labels) spec.regions.push_back({l, 0, l});
  } else {
    for (int l : labels) spec.regions.push_back({l, 0, std::nullopt});
  }
  return spec;
}

StylizeResult stylize(const StylizeJob& job) {
  const FeatureExtractor extractor(job.extractor);
  StyleSpec spec = build_style_spec(job, extractor);
  auto trace0 = extractor.forward(job.content);
  const auto& content_taps = FeatureExtractor::taps(*trace0);
  if (job.loss.content_weight > 0.0) spec.content_reference = content_taps;
  const StyleLoss loss(std::move(spec), layout_of(content_taps), job.loss);

  const std::size_t n = job.content.data().size();
  std::vector<double> x(job.content.data().begin(), job.content.data().end());
  std::vector<double> m(n, 0.0), v(n, 0.0);
  std::vector<bool> frozen(n, false);
  if (job.content_mask && job.loss.exclude_label) {
    const auto labels = job.content_mask->labels();
    for (std::size_t p = 0; p < labels.size(); ++p) {
      if (labels[p] == *job.loss.exclude_label) {
        for (std::size_t c = 0; c < 3; ++c) frozen[3 * p + c] = true;
      }
    }
  }

  StylizeResult out;
  for (const auto& shape : loss.layout()) out.trace.layer_ids.push_back(shape.layer_id);
  out.trace.rows.reserve(job.iterations);
  double b1t = 1.0, b2t = 1.0;
  ImageBuffer current = job.content;
  for (std::size_t it = 0; it < job.iterations; ++it) {
    const auto t0 = Clock::now();
    auto trace = it == 0 ? std::move(trace0) : extractor.forward(current);
    const auto t1 = Clock::now();
    const StyleLossResult r = loss.evaluate(FeatureExtractor::taps(*trace), derive_seed({job.seed, it}));
    const double loss_ms = ms_since(t1);
    if (!std::isfinite(r.report.total)) {
      throw NumericalError("stylize: loss became non-finite at iteration " + std::to_string(it) +
                           " (style " + fmt9(r.report.style) + ", content " +
                           fmt9(r.report.content) + ")");
    }
    const std::vector<double> g = extractor.backprop(*trace, r.gradients);
    b1t *= job.beta1;
    b2t *= job.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      if (!std::isfinite(g[i])) {
        throw NumericalError("stylize: non-finite pixel gradient at iteration " + std::to_string(it));
      }
      m[i] = job.beta1 * m[i] + (1.0 - job.beta1) * g[i];
      v[i] = job.beta2 * v[i] + (1.0 - job.beta2) * g[i] * g[i];
      const double mh = m[i] / (1.0 - b1t);
      const double vh = v[i] / (1.0 - b2t);
      x[i] = std::clamp(x[i] - job.learning_rate * mh / (std::sqrt(vh) + job.adam_epsilon), 0.0, 1.0);
    }
    current = ImageBuffer(job.content.height(), job.content.width(), 3, x);

    TraceRow row;
    row.iteration = it;
    row.total = r.report.total;
    row.style = r.report.style;
    row.content = r.report.content;
    for (const auto& l : r.report.per_layer) row.per_layer.push_back(l.value);
    row.loss_ms = loss_ms;
    row.ms = ms_since(t0);
    out.trace.rows.push_back(std::move(row));
    if (job.snapshot_every > 0 && job.on_snapshot && (it + 1) % job.snapshot_every == 0) {
      job.on_snapshot(it + 1, current);
    }
  }
  out.image = std::move(current);
  return out;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "iteration,total";
  for (int id : trace.layer_ids) out << ",layer_" << id;
  out << ",ms,loss_ms\n";
  for (const auto& row : trace.rows) {
    out << row.iteration << ',' << fmt9(row.total);
    for (double v : row.per_layer) out << ',' << fmt9(v);
    out << ',' << fmt9(row.ms) << ',' << fmt9(row.loss_ms) << '\n';
  }
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write trace '" + path.string() + "'");
  write_trace_csv(trace, f);
  if (!f) throw IoError("failed writing trace '" + path.string() + "'");
}

double evaluate_swd(const ImageBuffer& image, const ImageBuffer& style, const ExtractorSpec& spec,
                    std::uint64_t seed) {
  const FeatureExtractor ex(spec);
  const auto src = ex.extract(image);
  const auto tgt = ex.extract(style);
  const auto proj = full_budget(src, seed);
  double total = 0.0;
  for (std::size_t l = 0; l < src.size(); ++l) total += swd(src[l], tgt[l], proj[l]).value;
  return total;
}

double evaluate_region_swd(const ImageBuffer& image, const RegionMask& mask, int label,
                           const ImageBuffer& style, const ExtractorSpec& spec,
                           std::uint64_t seed) {
  if (mask.height() != image.height() || mask.width() != image.width()) {
    throw_dimension("evaluate_region_swd: mask does not match the image");
  }
  const FeatureExtractor ex(spec);
  const auto src = ex.extract(image);
  const auto tgt = ex.extract(style);
  const auto proj = full_budget(src, seed);
  double total = 0.0;
  for (std::size_t l = 0; l < src.size(); ++l) {
    total += swd(region_rows(src[l], mask, label), tgt[l], proj[l]).value;
  }
  return total;
}

BenchmarkResult benchmark_iw_vs_vanilla(const StylizeJob& job, double iw_fraction) {
  if (job.styles.size() != 1 || job.content_mask) {
    throw_domain("benchmark: expects a single global style");
  }
  auto run = [&](std::string name, Weighting mode, double fraction) {
    StylizeJob j = job;
    j.loss.mode = mode;
    j.loss.projection_fraction = fraction;
    j.loss.projection_counts.clear();
    BenchmarkRun b;
    b.name = std::move(name);
    b.mode = mode;
    b.projection_fraction = fraction;
    b.result = stylize(j);
    double sum = 0.0;
    for (const auto& row : b.result.trace.rows) sum += row.loss_ms;
    b.mean_loss_ms = sum / static_cast<double>(b.result.trace.rows.size());
    b.final_loss = b.result.trace.rows.back().total;
    b.final_eval = evaluate_swd(b.result.image, job.styles[0], job.extractor, job.seed);
    return b;
  };
  BenchmarkResult out;
  out.uniform = run("uniform", Weighting::uniform, 1.0);
  out.importance = run("importance", Weighting::importance, iw_fraction);
  out.speedup = out.importance.mean_loss_ms > 0.0
                    ? out.uniform.mean_loss_ms / out.importance.mean_loss_ms
                    : 0.0;
  out.relative_gap = std::abs(out.importance.final_loss - out.uniform.final_loss) /
                     out.uniform.final_loss;
  out.eval_gap = std::abs(out.importance.final_eval - out.uniform.final_eval) /
                 out.uniform.final_eval;
  return out;
}

void write_benchmark(const BenchmarkResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_trace_csv(result.uniform.result.trace, dir / "uniform.csv");
  write_trace_csv(result.importance.result.trace, dir / "importance.csv");
  std::ofstream f(dir / "summary.txt", std::ios::binary);
  if (!f) throw IoError("cannot write summary in '" + dir.string() + "'");
  for (const BenchmarkRun* b : {&result.uniform, &result.importance}) {
    const auto& rows = b->result.trace.rows;
    f << b->name << "_projection_fraction=" << fmt9(b->projection_fraction) << '\n'
      << b->name << "_initial_loss=" << fmt9(rows.front().total) << '\n'
      << b->name << "_final_loss=" << fmt9(rows.back().total) << '\n'
      << b->name << "_final_eval=" << fmt9(b->final_eval) << '\n'
      << b->name << "_mean_loss_ms=" << fmt9(b->mean_loss_ms) << '\n';
  }
  f << "relative_gap=" << fmt9(result.relative_gap) << '\n'
    << "eval_gap=" << fmt9(result.eval_gap) << '\n'
    << "speedup=" << fmt9(result.speedup) << '\n';
  if (!f) throw IoError("failed writing summary in '" + dir.string() + "'");
}

}  // namespace swdstyle
