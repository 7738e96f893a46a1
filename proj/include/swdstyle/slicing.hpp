// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swdstyle/tensors.hpp"

namespace swdstyle {

/// K unit directions in R^dim, stored row-major (K rows of dim values).
class ProjectionSet {
 public:
  ProjectionSet() = default;
  /// Explicit directions; each row is checked to have unit norm within 1e-6.
  ProjectionSet(std::size_t dim, std::size_t count, std::vector<double> vectors,
                std::uint64_t seed = 0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return count_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> vector(std::size_t k) const {
    return std::span<const double>(vectors_).subspan(k * dim_, dim_);
  }
  std::span<const double> data() const noexcept { return vectors_; }

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> vectors_;
};

/// I.i.d. directions uniform on the (dim-1)-sphere: each row normalizes dim
/// standard-normal draws from its own counter stream derive_seed(seed, k), so
/// row k does not depend on `count`. Draws with norm below 1e-12 are redrawn.
ProjectionSet sample_projections(std::size_t dim, std::size_t count, std::uint64_t seed);

/// Scalar populations, one per direction: K rows of M values.
struct Populations {
  std::size_t count = 0;   // K
  std::size_t length = 0;  // M
  std::vector<double> values;

  std::span<const double> row(std::size_t k) const {
    return std::span<const double>(values).subspan(k * length, length);
  }
};

/// out[k][m] = <F_m, V_k>.
Populations project(const FeatureMap& map, const ProjectionSet& proj);

}  // namespace swdstyle
