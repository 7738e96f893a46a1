// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/swd_loss.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "swdstyle/errors.hpp"
#include "swdstyle/parallel.hpp"
#include "swdstyle/rng.hpp"

namespace swdstyle {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Scratch {
  std::vector<std::uint32_t> order_p;
  std::vector<std::uint32_t> order_q;
  std::vector<double> resampled;
  std::vector<double> sorted_grad;
  std::vector<double> gather_p;
  std::vector<double> gather_q;
  std::vector<double> region_grad;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

// Ascending order with ties broken by original index.
void argsort(std::span<const double> v, std::vector<std::uint32_t>& order) {
  thread_local std::vector<std::pair<double, std::uint32_t>> keyed;
  keyed.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) keyed[i] = {v[i], static_cast<std::uint32_t>(i)};
  std::sort(keyed.begin(), keyed.end());
  order.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = keyed[i].second;
}

struct Interp {
  std::size_t lo = 0;
  double alpha = 0.0;
};

Interp quantile_position(std::size_t j, std::size_t n, std::size_t target) {
  if (n == 1) return {0, 0.0};
  const double pos = target == 1
                         ? 0.5 * static_cast<double>(n - 1)
                         : static_cast<double>(j) * static_cast<double>(n - 1) /
                               static_cast<double>(target - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo >= n - 1) return {n - 1, 0.0};
  return {lo, pos - static_cast<double>(lo)};
}

// Equal-length kernel; writes d value / d p into grad.
double sw1d_into(std::span<const double> p, std::span<const double> q, std::span<double> grad,
                 Scratch& s) {
  const std::size_t n = p.size();
  argsort(p, s.order_p);
  argsort(q, s.order_q);
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double diff = p[s.order_p[r]] - q[s.order_q[r]];
    sum += diff * diff;
    grad[s.order_p[r]] = 2.0 * inv_n * diff;
  }
  return sum * inv_n;
}

double sw1d_resampled_into(std::span<const double> p, std::span<const double> q,
                           std::span<double> grad, Scratch& s) {
  const std::size_t n = p.size();
  const std::size_t t = q.size();
  if (n == t) return sw1d_into(p, q, grad, s);
  if (n < t) {
    // Target is longer: resample it down, the source keeps its own pixels.
    std::vector<double> q_small = quantile_resample(q, n);
    return sw1d_into(p, q_small, grad, s);
  }
  // Source is longer: resample sort(p) down to t and push the gradient back
  // through the interpolation weights.
  argsort(p, s.order_p);
  argsort(q, s.order_q);
  s.sorted_grad.assign(n, 0.0);
  const double inv_t = 1.0 / static_cast<double>(t);
  double sum = 0.0;
  for (std::size_t j = 0; j < t; ++j) {
    const Interp ip = quantile_position(j, n, t);
    const double lo_v = p[s.order_p[ip.lo]];
    const double hi_v = ip.alpha > 0.0 ? p[s.order_p[ip.lo + 1]] : lo_v;
    const double r = (1.0 - ip.alpha) * lo_v + ip.alpha * hi_v;
    const double diff = r - q[s.order_q[j]];
    sum += diff * diff;
    s.sorted_grad[ip.lo] += 2.0 * inv_t * diff * (1.0 - ip.alpha);
    if (ip.alpha > 0.0) s.sorted_grad[ip.lo + 1] += 2.0 * inv_t * diff * ip.alpha;
  }
  for (std::size_t i = 0; i < n; ++i) grad[s.order_p[i]] = s.sorted_grad[i];
  return sum * inv_t;
}

// Sums the region costs of one direction; `grad` must be zeroed by the
// caller and stays zero outside participating source pixels.
double region_cost(std::span<const double> src, std::span<const std::span<const double>> tgts,
                   std::span<const StyleLoss::RegionPlan> plans, std::span<double> grad,
                   Scratch& s) {
  double total = 0.0;
  for (const auto& plan : plans) {
    const std::span<const double> tgt = tgts[plan.target];
    std::span<const double> q = tgt;
    if (!plan.target_all) {
      s.gather_q.resize(plan.target_pixels.size());
      for (std::size_t i = 0; i < plan.target_pixels.size(); ++i) {
        s.gather_q[i] = tgt[plan.target_pixels[i]];
      }
      q = s.gather_q;
    }
    if (plan.source_all) {
      total += sw1d_resampled_into(src, q, grad, s);
      continue;
    }
    const auto& idx = plan.source_pixels;
    s.gather_p.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) s.gather_p[i] = src[idx[i]];
    s.region_grad.assign(idx.size(), 0.0);
    total += sw1d_resampled_into(s.gather_p, q, s.region_grad, s);
    for (std::size_t i = 0; i < idx.size(); ++i) grad[idx[i]] = s.region_grad[i];
  }
  return total;
}

struct LayerOutput {
  double value = 0.0;
  std::vector<double> distances;
  std::vector<double> weights;
  std::vector<double> gradient;  // M x N
};

LayerOutput evaluate_layer(const FeatureMap& src, std::span<const FeatureMap* const> targets,
                           std::span<const StyleLoss::RegionPlan> plans,
                           const ProjectionSet& proj, Weighting mode, bool weight_gradient) {
  if (proj.dim() != src.channels()) {
    throw_dimension("projection dim does not match source channels");
  }
  const Populations src_pop = project(src, proj);
  std::vector<Populations> tgt_pop(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] != nullptr) tgt_pop[t] = project(*targets[t], proj);
  }
  const std::size_t k_count = proj.count();
  const std::size_t m = src.pixel_count();

  LayerOutput out;
  out.distances.assign(k_count, 0.0);
  std::vector<double> pop_grad(k_count * m, 0.0);
  parallel_for(k_count, [&](std::size_t k) {
    std::vector<std::span<const double>> tgt_rows(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (targets[t] != nullptr) tgt_rows[t] = tgt_pop[t].row(k);
    }
    std::span<double> grow(pop_grad.data() + k * m, m);
    out.distances[k] = region_cost(src_pop.row(k), tgt_rows, plans, grow, scratch());
  });

  auto [value, weights] = combine_distances(out.distances, mode);
  out.value = value;
  out.weights = std::move(weights);

  // d value / d d_k: w_k with frozen weights; w_k (1 + d_k - value) when the
  // softmax itself is differentiated.
  Eigen::VectorXd coeff(static_cast<Eigen::Index>(k_count));
  for (std::size_t k = 0; k < k_count; ++k) {
    double c = out.weights[k];
    if (mode == Weighting::importance && weight_gradient) {
      c *= 1.0 + out.distances[k] - out.value;
    }
    coeff[static_cast<Eigen::Index>(k)] = c;
  }
  const auto km = static_cast<Eigen::Index>(k_count);
  const auto mm = static_cast<Eigen::Index>(m);
  const auto nn = static_cast<Eigen::Index>(src.channels());
  Eigen::Map<const RowMatrix> g(pop_grad.data(), km, mm);
  Eigen::Map<const RowMatrix> dirs(proj.data().data(), km, nn);
  out.gradient.assign(m * src.channels(), 0.0);
  Eigen::Map<RowMatrix> grad(out.gradient.data(), mm, nn);
  grad.noalias() = g.transpose() * (coeff.asDiagonal() * dirs);
  return out;
}

std::vector<std::uint32_t> pixels_with_label(const RegionMask& mask, int label) {
  std::vector<std::uint32_t> out;
  const auto labels = mask.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

void check_population(std::span<const double> v, const char* name) {
  if (v.empty()) throw_domain(std::string(name) + ": empty population");
}

SwdResult single_pair(const FeatureMap& src, const FeatureMap& tgt, const ProjectionSet& proj,
                      Weighting mode, bool weight_gradient, bool allow_resample) {
  if (src.channels() != tgt.channels()) {
    throw_dimension("swd: channel mismatch " + std::to_string(src.channels()) + " vs " +
                    std::to_string(tgt.channels()));
  }
  if (!allow_resample && src.pixel_count() != tgt.pixel_count()) {
    throw_dimension("swd: pixel counts differ and resampling is disabled");
  }
  StyleLoss::RegionPlan plan;
  plan.source_all = true;
  plan.target_all = true;
  const FeatureMap* targets[] = {&tgt};
  LayerOutput layer = evaluate_layer(src, targets, std::span(&plan, 1), proj, mode, weight_gradient);
  SwdResult out;
  out.value = layer.value;
  out.distances = std::move(layer.distances);
  out.weights = std::move(layer.weights);
  out.gradient = GradientBuffer{src.layer_id(), src.channels(), src.height(), src.width(),
                                std::move(layer.gradient)};
  return out;
}

}  // namespace

std::size_t projection_budget(std::size_t channels, double fraction) {
  const double raw = std::round(fraction * static_cast<double>(channels));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

void LossConfig::validate() const {
  if (!(projection_fraction > 0.0 && projection_fraction <= 1.0)) {
    throw_domain("projection fraction must lie in (0, 1]");
  }
  for (auto c : projection_counts) {
    if (c == 0) throw_domain("projection counts must be >= 1");
  }
  if (!std::isfinite(content_weight) || content_weight < 0.0) {
    throw_domain("content weight must be finite and >= 0");
  }
  if (!std::isfinite(style_weight) || style_weight < 0.0) {
    throw_domain("style weight must be finite and >= 0");
  }
  if (exclude_label && (*exclude_label < 0 || *exclude_label > 255)) {
    throw_domain("exclude label must be an 8-bit label");
  }
}

std::size_t LossConfig::projections_for(std::size_t layer_index, std::size_t channels) const {
  if (!projection_counts.empty()) {
    if (layer_index >= projection_counts.size()) {
      throw_domain("no projection count configured for layer position " +
                   std::to_string(layer_index));
    }
    return projection_counts[layer_index];
  }
  return projection_budget(channels, projection_fraction);
}

Sw1dResult sw1d(std::span<const double> p, std::span<const double> q) {
  check_population(p, "sw1d");
  check_population(q, "sw1d");
  if (p.size() != q.size()) {
    throw_dimension("sw1d: population lengths differ (" + std::to_string(p.size()) + " vs " +
                    std::to_string(q.size()) + ")");
  }
  Sw1dResult out;
  out.gradient.assign(p.size(), 0.0);
  out.value = sw1d_into(p, q, out.gradient, scratch());
  return out;
}

std::vector<double> quantile_resample(std::span<const double> p, std::size_t target_len) {
  check_population(p, "quantile_resample");
  if (target_len == 0) throw_domain("quantile_resample: target length must be >= 1");
  std::vector<double> sorted(p.begin(), p.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (target_len == n) return sorted;
  std::vector<double> out(target_len);
  for (std::size_t j = 0; j < target_len; ++j) {
    const Interp ip = quantile_position(j, n, target_len);
    const double hi = ip.alpha > 0.0 ? sorted[ip.lo + 1] : sorted[ip.lo];
    out[j] = (1.0 - ip.alpha) * sorted[ip.lo] + ip.alpha * hi;
  }
  return out;
}

Sw1dResult sw1d_resampled(std::span<const double> p, std::span<const double> q) {
  check_population(p, "sw1d_resampled");
  check_population(q, "sw1d_resampled");
  Sw1dResult out;
  out.gradient.assign(p.size(), 0.0);
  out.value = sw1d_resampled_into(p, q, out.gradient, scratch());
  return out;
}

Sw1dResult mr_sw1d(std::span<const double> p, std::span<const double> q,
                   std::span<const std::uint8_t> labels_p,
                   std::span<const std::uint8_t> labels_q, int max_label,
                   std::optional<int> exclude) {
  if (labels_p.size() != p.size() || labels_q.size() != q.size()) {
    throw_dimension("mr_sw1d: label vectors must align with populations");
  }
  if (max_label < 0 || max_label > 255) throw_domain("mr_sw1d: max label out of range");
  auto check_labels = [&](std::span<const std::uint8_t> labels) {
    for (auto l : labels) {
      if (l > max_label) throw_domain("mr_sw1d: label " + std::to_string(l) + " exceeds K");
    }
  };
  check_labels(labels_p);
  check_labels(labels_q);

  std::vector<StyleLoss::RegionPlan> plans;
  for (int k = 0; k <= max_label; ++k) {
    if (exclude && *exclude == k) continue;
    StyleLoss::RegionPlan plan;
    for (std::size_t i = 0; i < labels_p.size(); ++i) {
      if (labels_p[i] == k) plan.source_pixels.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t i = 0; i < labels_q.size(); ++i) {
      if (labels_q[i] == k) plan.target_pixels.push_back(static_cast<std::uint32_t>(i));
    }
    const bool sp = !plan.source_pixels.empty();
    const bool tp = !plan.target_pixels.empty();
    if (sp != tp) {
      throw_domain("mr_sw1d: region " + std::to_string(k) + " is empty on one side only");
    }
    if (sp) plans.push_back(std::move(plan));
  }
  if (plans.empty()) throw_domain("mr_sw1d: all regions are empty");

  Sw1dResult out;
  out.gradient.assign(p.size(), 0.0);
  const std::span<const double> tgts[] = {q};
  out.value = region_cost(p, tgts, plans, out.gradient, scratch());
  return out;
}

std::pair<double, std::vector<double>> combine_distances(std::span<const double> distances,
                                                         Weighting mode) {
  if (distances.empty()) throw_domain("combine_distances: no distances");
  const std::size_t k = distances.size();
  std::vector<double> w(k);
  if (mode == Weighting::uniform) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(k));
  } else {
    const double mx = *std::max_element(distances.begin(), distances.end());
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = std::exp(distances[i] - mx);
      z += w[i];
    }
    for (auto& wi : w) wi /= z;
  }
  double value = 0.0;
  for (std::size_t i = 0; i < k; ++i) value += w[i] * distances[i];
  return {value, std::move(w)};
}

SwdResult swd(const FeatureMap& src, const FeatureMap& tgt, const ProjectionSet& proj,
              bool allow_resample) {
  return single_pair(src, tgt, proj, Weighting::uniform, false, allow_resample);
}

SwdResult iw_swd(const FeatureMap& src, const FeatureMap& tgt, const ProjectionSet& proj,
                 bool weight_gradient, bool allow_resample) {
  return single_pair(src, tgt, proj, Weighting::importance, weight_gradient, allow_resample);
}

ContentResult content_loss(std::span<const FeatureMap> src, std::span<const FeatureMap> ref,
                           double lambda) {
  if (src.size() != ref.size()) throw_dimension("content_loss: layer count mismatch");
  if (!std::isfinite(lambda) || lambda < 0.0) throw_domain("content_loss: lambda must be >= 0");
  ContentResult out;
  for (std::size_t l = 0; l < src.size(); ++l) {
    const auto& f = src[l];
    const auto& r = ref[l];
    if (f.channels() != r.channels() || f.height() != r.height() || f.width() != r.width()) {
      throw_dimension("content_loss: shape mismatch at layer position " + std::to_string(l));
    }
    const double scale = 1.0 / static_cast<double>(f.data().size());
    GradientBuffer g = GradientBuffer::zeros_like(f);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      const double d = f.data()[i] - r.data()[i];
      sum += d * d;
      g.data[i] = 2.0 * lambda * scale * d;
    }
    out.value += lambda * sum * scale;
    out.gradients.push_back(std::move(g));
  }
  return out;
}

StyleSpec StyleSpec::global(std::vector<FeatureMap> target_layers) {
  StyleSpec spec;
  spec.targets.push_back(StyleTarget{std::move(target_layers), std::nullopt});
  return spec;
}

StyleSpec StyleSpec::paired(std::vector<FeatureMap> target_layers, RegionMask source_mask,
                            RegionMask target_mask) {
  StyleSpec spec;
  std::vector<bool> used(256, false);
  for (int l : source_mask.present_labels()) used[l] = true;
  for (int l : target_mask.present_labels()) used[l] = true;
  for (int l = 0; l < 256; ++l) {
    if (used[l]) spec.regions.push_back(RegionAssignment{l, 0, l});
  }
  spec.targets.push_back(StyleTarget{std::move(target_layers), std::move(target_mask)});
  spec.source_mask = std::move(source_mask);
  return spec;
}

StyleLoss::StyleLoss(StyleSpec spec, std::vector<LayerShape> source_layout, LossConfig config)
    : spec_(std::move(spec)), layout_(std::move(source_layout)), config_(std::move(config)) {
  config_.validate();
  if (layout_.empty()) throw_domain("style loss needs at least one layer");
  if (spec_.targets.empty()) throw_domain("style loss needs at least one target");
  for (std::size_t t = 0; t < spec_.targets.size(); ++t) {
    const auto& layers = spec_.targets[t].layers;
    if (layers.size() != layout_.size()) {
      throw_dimension("target " + std::to_string(t) + " has " + std::to_string(layers.size()) +
                      " layers, source has " + std::to_string(layout_.size()));
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
      if (layers[l].channels() != layout_[l].channels) {
        throw_dimension("target " + std::to_string(t) + " channel mismatch at layer position " +
                        std::to_string(l));
      }
      if (!config_.allow_resample && layers[l].pixel_count() !=
                                         layout_[l].height * layout_[l].width) {
        throw_dimension("pixel counts differ and resampling is disabled");
      }
    }
  }
  if (!config_.projection_counts.empty() && config_.projection_counts.size() < layout_.size()) {
    throw_domain("projection count list shorter than the layer list");
  }
  if (!spec_.content_reference.empty()) {
    if (spec_.content_reference.size() != layout_.size()) {
      throw_dimension("content reference layer count mismatch");
    }
    for (std::size_t l = 0; l < layout_.size(); ++l) {
      if (!(LayerShape::of(spec_.content_reference[l]) == layout_[l])) {
        throw_dimension("content reference shape mismatch at layer position " +
                        std::to_string(l));
      }
    }
  }

  plans_.resize(layout_.size());
  if (!spec_.source_mask) {
    if (spec_.targets.size() != 1) {
      throw_domain("several style targets require a source mask");
    }
    for (auto& layer_plans : plans_) {
      RegionPlan plan;
      plan.source_all = true;
      plan.target_all = true;
      layer_plans.push_back(plan);
    }
    return;
  }

  const RegionMask& src_mask = *spec_.source_mask;
  std::vector<bool> assigned(256, false);
  for (const auto& r : spec_.regions) {
    if (r.source_label < 0 || r.source_label > 255) throw_domain("region label out of range");
    if (r.target >= spec_.targets.size()) throw_domain("region refers to a missing target");
    if (r.target_label && !spec_.targets[r.target].mask) {
      throw_domain("region " + std::to_string(r.source_label) +
                   " selects a target label but the target has no mask");
    }
    if (assigned[r.source_label]) {
      throw_domain("region " + std::to_string(r.source_label) + " assigned twice");
    }
    assigned[r.source_label] = true;
  }
  for (int l : src_mask.present_labels()) {
    const bool excluded = config_.exclude_label && *config_.exclude_label == l;
    if (!assigned[l] && !excluded) {
      throw_domain("source label " + std::to_string(l) + " has no style target");
    }
  }

  for (std::size_t l = 0; l < layout_.size(); ++l) {
    const auto& shape = layout_[l];
    const RegionMask src_l = downsample_mask(src_mask, shape.height, shape.width);
    for (const auto& r : spec_.regions) {
      if (config_.exclude_label && *config_.exclude_label == r.source_label) continue;
      RegionPlan plan;
      plan.target = r.target;
      plan.source_pixels = pixels_with_label(src_l, r.source_label);
      const FeatureMap& tgt_layer = spec_.targets[r.target].layers[l];
      if (r.target_label) {
        const RegionMask tgt_l =
            downsample_mask(*spec_.targets[r.target].mask, tgt_layer.height(), tgt_layer.width());
        plan.target_pixels = pixels_with_label(tgt_l, *r.target_label);
      } else {
        plan.target_all = true;
      }
      const bool src_nonempty = !plan.source_pixels.empty();
      const bool tgt_nonempty = plan.target_all || !plan.target_pixels.empty();
      if (src_nonempty != tgt_nonempty) {
        throw_domain("region " + std::to_string(r.source_label) +
                     " is empty on one side only at layer " + std::to_string(shape.layer_id) +
                     " (" + std::to_string(shape.height) + "x" + std::to_string(shape.width) +
                     ")");
      }
      if (src_nonempty) plans_[l].push_back(std::move(plan));
    }
    if (plans_[l].empty()) {
      throw_domain("all regions are empty at layer " + std::to_string(shape.layer_id));
    }
  }
}

std::size_t StyleLoss::projections_for_layer(std::size_t index) const {
  return config_.projections_for(index, layout_[index].channels);
}

StyleLossResult StyleLoss::evaluate(std::span<const FeatureMap> source, std::uint64_t seed) const {
  std::vector<ProjectionSet> projections;
  projections.reserve(layout_.size());
  for (std::size_t l = 0; l < layout_.size(); ++l) {
    projections.push_back(sample_projections(
        layout_[l].channels, projections_for_layer(l),
        derive_seed({seed, static_cast<std::uint64_t>(layout_[l].layer_id)})));
  }
  return run(source, projections, true);
}

StyleLossResult StyleLoss::evaluate_with(std::span<const FeatureMap> source,
                                         std::span<const ProjectionSet> projections) const {
  return run(source, projections, false);
}

StyleLossResult StyleLoss::run(std::span<const FeatureMap> source,
                               std::span<const ProjectionSet> projections,
                               bool with_content) const {
  if (source.size() != layout_.size()) throw_dimension("source layer count mismatch");
  if (projections.size() != layout_.size()) throw_dimension("projection list length mismatch");
  for (std::size_t l = 0; l < layout_.size(); ++l) {
    if (!(LayerShape::of(source[l]) == layout_[l])) {
      throw_dimension("source layer shape differs from the planned layout at position " +
                      std::to_string(l));
    }
  }
  StyleLossResult out;
  out.gradients.reserve(layout_.size());
  for (std::size_t l = 0; l < layout_.size(); ++l) {
    std::vector<const FeatureMap*> targets(spec_.targets.size(), nullptr);
    for (const auto& plan : plans_[l]) targets[plan.target] = &spec_.targets[plan.target].layers[l];
    LayerOutput layer = evaluate_layer(source[l], targets, plans_[l], projections[l],
                                       config_.mode, config_.weight_gradient);
    LayerLoss entry;
    entry.layer_id = layout_[l].layer_id;
    entry.value = config_.style_weight * layer.value;
    entry.projections.reserve(layer.distances.size());
    for (std::size_t k = 0; k < layer.distances.size(); ++k) {
      entry.projections.push_back({layer.distances[k], layer.weights[k]});
    }
    out.report.style += entry.value;
    out.report.per_layer.push_back(std::move(entry));
    GradientBuffer g = GradientBuffer::zeros_like(source[l]);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      g.data[i] = config_.style_weight * layer.gradient[i];
    }
    out.gradients.push_back(std::move(g));
  }
  if (with_content && !spec_.content_reference.empty() && config_.content_weight > 0.0) {
    ContentResult content = content_loss(source, spec_.content_reference, config_.content_weight);
    out.report.content = content.value;
    for (std::size_t l = 0; l < layout_.size(); ++l) {
      for (std::size_t i = 0; i < out.gradients[l].data.size(); ++i) {
        out.gradients[l].data[i] += content.gradients[l].data[i];
      }
    }
  }
  out.report.total = out.report.style + out.report.content;
  return out;
}

StyleLossResult style_loss(std::span<const FeatureMap> src_layers, StyleSpec spec,
                           const LossConfig& config, std::uint64_t seed) {
  std::vector<LayerShape> layout;
  layout.reserve(src_layers.size());
  for (const auto& f : src_layers) layout.push_back(LayerShape::of(f));
  StyleLoss loss(std::move(spec), std::move(layout), config);
  return loss.evaluate(src_layers, seed);
}

}  // namespace swdstyle
