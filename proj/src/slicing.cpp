// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/slicing.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "swdstyle/errors.hpp"
#include "swdstyle/rng.hpp"

namespace swdstyle {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kMinDrawNorm = 1e-12;

}  // namespace

ProjectionSet::ProjectionSet(std::size_t dim, std::size_t count, std::vector<double> vectors,
                             std::uint64_t seed)
    : dim_(dim), count_(count), seed_(seed), vectors_(std::move(vectors)) {
  if (dim == 0 || count == 0) throw_dimension("projection set needs dim >= 1 and count >= 1");
  if (vectors_.size() != dim * count) throw_dimension("projection data length mismatch");
  for (std::size_t k = 0; k < count; ++k) {
    double sq = 0.0;
    for (double v : vector(k)) sq += v * v;
    if (std::abs(std::sqrt(sq) - 1.0) >= 1e-6) {
      throw_domain("projection " + std::to_string(k) + " is not a unit vector");
    }
  }
}

ProjectionSet sample_projections(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0) throw_dimension("sample_projections: dim must be >= 1");
  if (count == 0) throw_dimension("sample_projections: count must be >= 1");
  std::vector<double> vectors(dim * count);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng(derive_seed({seed, static_cast<std::uint64_t>(k)}));
    double* row = vectors.data() + k * dim;
    double norm = 0.0;
    do {
      double sq = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        row[i] = rng.normal();
        sq += row[i] * row[i];
      }
      norm = std::sqrt(sq);
    } while (norm < kMinDrawNorm);
    for (std::size_t i = 0; i < dim; ++i) row[i] /= norm;
  }
  return ProjectionSet(dim, count, std::move(vectors), seed);
}

Populations project(const FeatureMap& map, const ProjectionSet& proj) {
  if (proj.dim() != map.channels()) {
    throw_dimension("project: direction dim " + std::to_string(proj.dim()) +
                    " != feature channels " + std::to_string(map.channels()));
  }
  const auto m = static_cast<Eigen::Index>(map.pixel_count());
  const auto n = static_cast<Eigen::Index>(map.channels());
  const auto k = static_cast<Eigen::Index>(proj.count());
  Populations out{proj.count(), map.pixel_count(), std::vector<double>(proj.count() * map.pixel_count())};
  Eigen::Map<const RowMatrix> features(map.data().data(), m, n);
  Eigen::Map<const RowMatrix> dirs(proj.data().data(), k, n);
  Eigen::Map<RowMatrix> pops(out.values.data(), k, m);
  pops.noalias() = dirs * features.transpose();
  return out;
}

}  // namespace swdstyle
