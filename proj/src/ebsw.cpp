// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/ebsw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swdstyle/errors.hpp"
#include "swdstyle/parallel.hpp"

namespace swdstyle {
namespace {

constexpr double kWeightSumTolerance = 1e-9;

double power_abs(double x, double p) {
  const double a = std::abs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

void check_order(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw_domain("Wasserstein order p must be >= 1");
}

void check_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw_dimension("measures live in different dimensions (" + std::to_string(mu.dim()) +
                    " vs " + std::to_string(nu.dim()) + ")");
  }
}

// Sorted support and cumulative weights with the last entry pinned to 1.
void sorted_cdf(std::span<const double> x, std::span<const double> w, std::vector<double>& xs,
                std::vector<double>& cdf) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && a < b);
  });
  xs.resize(x.size());
  cdf.resize(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    xs[i] = x[order[i]];
    acc += w[order[i]];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
}

std::vector<double> project_support(const DiscreteMeasure& m, std::span<const double> v) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto pt = m.point(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) dot += pt[j] * v[j];
    out[i] = dot;
  }
  return out;
}

std::vector<double> uniform_weights(std::size_t dim, std::size_t support_len) {
  if (dim == 0 || support_len < dim) return {};
  const std::size_t n = support_len / dim;
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> support)
    : DiscreteMeasure(dim, support, uniform_weights(dim, support.size())) {}

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> support,
                                 std::vector<double> weights)
    : dim_(dim), support_(std::move(support)), weights_(std::move(weights)) {
  if (dim_ == 0) throw_dimension("measure dimension must be >= 1");
  if (weights_.empty()) throw_domain("measure must have at least one support point");
  if (support_.size() != weights_.size() * dim_) {
    throw_dimension("support length does not match weights x dim");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw_domain("measure weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) throw_domain("measure weights must sum to 1");
  for (double v : support_) {
    if (!std::isfinite(v)) throw_domain("measure support must be finite");
  }
}

EnergyFunction EnergyFunction::exponential() {
  return EnergyFunction(Kind::exponential, 1.0, nullptr, "exp");
}

EnergyFunction EnergyFunction::identity() {
  return EnergyFunction(Kind::identity, 1.0, nullptr, "identity");
}

EnergyFunction EnergyFunction::polynomial(double q) {
  if (!std::isfinite(q) || q < 0.0) {
    throw_domain("polynomial energy needs q >= 0 (negative powers are decreasing)");
  }
  return EnergyFunction(Kind::polynomial, q, nullptr, "poly");
}

EnergyFunction EnergyFunction::custom(std::function<double(double)> f, std::string name) {
  if (!f) throw_domain("custom energy function is empty");
  double prev = f(0.0);
  for (int i = 1; i <= 256; ++i) {
    const double x = 64.0 * i / 256.0;
    const double y = f(x);
    if (!std::isfinite(y) || y <= 0.0) throw_domain("energy function must be positive");
    if (y < prev) throw_domain("energy function '" + name + "' is not increasing");
    prev = y;
  }
  return EnergyFunction(Kind::custom, 1.0, std::move(f), std::move(name));
}

double EnergyFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::exponential:
      return std::exp(x);
    case Kind::identity:
      return x;
    case Kind::polynomial:
      return exponent_ == 0.0 ? 1.0 : std::pow(x, exponent_);
    case Kind::custom:
      return fn_(x);
  }
  return 0.0;
}

double wasserstein_pp_1d(std::span<const double> xa, std::span<const double> wa,
                         std::span<const double> xb, std::span<const double> wb, double p) {
  check_order(p);
  if (xa.empty() || xb.empty()) throw_domain("wasserstein_pp_1d: empty measure");
  if (xa.size() != wa.size() || xb.size() != wb.size()) {
    throw_dimension("wasserstein_pp_1d: support and weight lengths differ");
  }
  std::vector<double> sa, ca, sb, cb;
  sorted_cdf(xa, wa, sa, ca);
  sorted_cdf(xb, wb, sb, cb);
  double cost = 0.0;
  double prev = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double next = std::min(ca[i], cb[j]);
    const double mass = next - prev;
    if (mass > 0.0) cost += mass * power_abs(sa[i] - sb[j], p);
    prev = std::max(prev, next);
    if (ca[i] <= next) ++i;
    if (cb[j] <= next) ++j;
  }
  return cost;
}

std::vector<double> projected_distances(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                        double p, const ProjectionSet& proj) {
  check_pair(mu, nu);
  check_order(p);
  if (proj.dim() != mu.dim()) throw_dimension("projection dim does not match measure dim");
  std::vector<double> out(proj.count());
  parallel_for(proj.count(), [&](std::size_t k) {
    const auto v = proj.vector(k);
    const auto a = project_support(mu, v);
    const auto b = project_support(nu, v);
    out[k] = wasserstein_pp_1d(a, mu.weights(), b, nu.weights(), p);
  });
  return out;
}

double sw_hat_with(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                   const ProjectionSet& proj) {
  const auto d = projected_distances(mu, nu, p, proj);
  double sum = 0.0;
  for (double v : d) sum += v;
  return std::pow(sum / static_cast<double>(d.size()), 1.0 / p);
}

double sw_hat(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, std::size_t k,
              std::uint64_t seed) {
  check_pair(mu, nu);
  if (k == 0) throw_domain("sw_hat: K must be >= 1");
  return sw_hat_with(mu, nu, p, sample_projections(mu.dim(), k, seed));
}

EbswResult is_ebsw_from_distances(std::span<const double> distances, double p,
                                  const EnergyFunction& f,
                                  std::span<const double> proposal_density) {
  check_order(p);
  const std::size_t k = distances.size();
  if (k == 0) throw_domain("is_ebsw: no directions");
  if (!proposal_density.empty() && proposal_density.size() != k) {
    throw_dimension("is_ebsw: one proposal density per direction required");
  }
  for (double q : proposal_density) {
    if (!(q > 0.0) || !std::isfinite(q)) throw_domain("proposal densities must be positive");
  }
  EbswResult out;
  out.distances.assign(distances.begin(), distances.end());
  out.weights.resize(k);
  if (f.kind() == EnergyFunction::Kind::exponential) {
    // log w_k = d_k - log sigma0(V_k); normalize in the log domain.
    std::vector<double> logw(k);
    for (std::size_t i = 0; i < k; ++i) {
      logw[i] = distances[i] - (proposal_density.empty() ? 0.0 : std::log(proposal_density[i]));
    }
    const double mx = *std::max_element(logw.begin(), logw.end());
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      out.weights[i] = std::exp(logw[i] - mx);
      z += out.weights[i];
    }
    for (auto& w : out.weights) w /= z;
  } else {
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double e = f(distances[i]);
      out.weights[i] = proposal_density.empty() ? e : e / proposal_density[i];
      z += out.weights[i];
    }
    if (z > 0.0) {
      for (auto& w : out.weights) w /= z;
    } else {
      // Every energy is zero (e.g. identity energy on identical measures).
      std::fill(out.weights.begin(), out.weights.end(), 1.0 / static_cast<double>(k));
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += out.weights[i] * distances[i];
  out.value = std::pow(acc, 1.0 / p);
  return out;
}

EbswResult is_ebsw_with(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                        const ProjectionSet& proj, const EnergyFunction& f,
                        std::span<const double> proposal_density) {
  return is_ebsw_from_distances(projected_distances(mu, nu, p, proj), p, f, proposal_density);
}

EbswResult is_ebsw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                   std::size_t k, const EnergyFunction& f, std::uint64_t seed) {
  check_pair(mu, nu);
  if (k == 0) throw_domain("is_ebsw: K must be >= 1");
  return is_ebsw_with(mu, nu, p, sample_projections(mu.dim(), k, seed), f);
}

BoundCheck bound_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                       std::size_t k, std::uint64_t seed, const EnergyFunction& f) {
  check_pair(mu, nu);
  if (k == 0) throw_domain("bound_check: K must be >= 1");
  const ProjectionSet proj = sample_projections(mu.dim(), k, seed);
  const auto d = projected_distances(mu, nu, p, proj);
  double sum = 0.0;
  for (double v : d) sum += v;
  BoundCheck out;
  out.sw = std::pow(sum / static_cast<double>(k), 1.0 / p);
  out.ebsw = is_ebsw_from_distances(d, p, f).value;
  out.holds = out.ebsw >= out.sw - 1e-12;
  return out;
}

}  // namespace swdstyle
