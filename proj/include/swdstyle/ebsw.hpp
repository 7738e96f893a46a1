// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "swdstyle/slicing.hpp"

namespace swdstyle {

/// Finitely supported probability measure on R^d: n points (row-major) with
/// non-negative weights summing to 1.
class DiscreteMeasure {
 public:
  /// Uniform weights 1/n.
  DiscreteMeasure(std::size_t dim, std::vector<double> support);
  DiscreteMeasure(std::size_t dim, std::vector<double> support, std::vector<double> weights);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(support_).subspan(i * dim_, dim_);
  }
  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::size_t dim_;
  std::vector<double> support_;
  std::vector<double> weights_;
};

/// Energy f: [0, inf) -> (0, inf) used to tilt the slicing distribution
/// towards directions with larger projected distance.
class EnergyFunction {
 public:
  enum class Kind { exponential, identity, polynomial, custom };

  /// f(x) = e^x; weights are then a softmax of the distances.
  static EnergyFunction exponential();
  /// f(x) = x.
  static EnergyFunction identity();
  /// f(x) = x^q with q >= 0; q = 0 is the constant (uniform-weight) energy.
  static EnergyFunction polynomial(double q);
  /// Arbitrary energy, probed on a grid over [0, 64]; decreasing or
  /// non-positive functions are rejected.
  static EnergyFunction custom(std::function<double(double)> f, std::string name);

  double operator()(double x) const;
  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  EnergyFunction(Kind kind, double q, std::function<double(double)> f, std::string name)
      : kind_(kind), exponent_(q), fn_(std::move(f)), name_(std::move(name)) {}

  Kind kind_;
  double exponent_ = 1.0;
  std::function<double(double)> fn_;
  std::string name_;
};

/// W_p^p between two weighted 1D measures by quantile coupling (inverse CDFs
/// evaluated on the merged breakpoints of both cumulative weight sequences).
double wasserstein_pp_1d(std::span<const double> xa, std::span<const double> wa,
                         std::span<const double> xb, std::span<const double> wb, double p);

/// W_p^p(V_k # mu, V_k # nu) for every direction.
std::vector<double> projected_distances(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                        double p, const ProjectionSet& proj);

/// Monte Carlo sliced Wasserstein: ((1/K) sum_k W_p^p)^(1/p) over K uniform
/// directions drawn with sample_projections(d, K, seed).
double sw_hat(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, std::size_t k,
              std::uint64_t seed);
double sw_hat_with(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                   const ProjectionSet& proj);

struct EbswResult {
  double value = 0.0;              // (sum_k w_k W_p^p)^(1/p)
  std::vector<double> weights;     // normalized importance weights
  std::vector<double> distances;   // W_p^p per direction
};

/// Importance-sampling EBSW estimate from precomputed W_p^p values. Weights
/// are f(d_k)/sigma0(V_k), normalized; `proposal_density` empty means the
/// uniform proposal (the density cancels).
EbswResult is_ebsw_from_distances(std::span<const double> distances, double p,
                                  const EnergyFunction& f,
                                  std::span<const double> proposal_density = {});

EbswResult is_ebsw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                   std::size_t k, const EnergyFunction& f, std::uint64_t seed);
/// Caller-supplied directions, optionally with their proposal densities.
EbswResult is_ebsw_with(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                        const ProjectionSet& proj, const EnergyFunction& f,
                        std::span<const double> proposal_density = {});

struct BoundCheck {
  double sw = 0.0;
  double ebsw = 0.0;
  bool holds = false;  // ebsw >= sw - 1e-12
};

/// Evaluates sw_hat and IS-EBSW on the same K directions.
BoundCheck bound_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                       std::size_t k, std::uint64_t seed,
                       const EnergyFunction& f = EnergyFunction::exponential());

}  // namespace swdstyle
