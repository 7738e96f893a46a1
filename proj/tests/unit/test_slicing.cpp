// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "swdstyle/errors.hpp"
#include "swdstyle/slicing.hpp"

namespace {

using namespace swdstyle;

TEST(SampleProjections, UnitNormAndDeterministic) {
  for (std::size_t dim : {1u, 2u, 8u, 64u, 512u}) {
    const ProjectionSet a = sample_projections(dim, 17, 42);
    const ProjectionSet b = sample_projections(dim, 17, 42);
    EXPECT_EQ(std::vector<double>(a.data().begin(), a.data().end()),
              std::vector<double>(b.data().begin(), b.data().end()));
    for (std::size_t k = 0; k < a.count(); ++k) {
      double s = 0.0;
      for (double v : a.vector(k)) s += v * v;
      EXPECT_LT(std::abs(std::sqrt(s) - 1.0), 1e-6);
    }
  }
}

TEST(SampleProjections, ZeroSphere) {
  const ProjectionSet p = sample_projections(1, 50, 7);
  for (double v : p.data()) EXPECT_TRUE(v == 1.0 || v == -1.0);
}

TEST(SampleProjections, LayerOneBudget) {
  const ProjectionSet p = sample_projections(64, 3, 1);
  EXPECT_EQ(p.count(), 3u);
  EXPECT_EQ(p.dim(), 64u);
}

TEST(SampleProjections, SphericalSymmetry) {
  const ProjectionSet p = sample_projections(8, 10000, 99);
  for (std::size_t j = 0; j < 8; ++j) {
    double mean = 0.0;
    for (std::size_t k = 0; k < p.count(); ++k) mean += p.vector(k)[j];
    EXPECT_LT(std::abs(mean / 10000.0), 0.05);
  }
}

TEST(SampleProjections, PrefixStable) {
  // Row k depends only on (seed, k).
  const ProjectionSet a = sample_projections(16, 4, 5);
  const ProjectionSet b = sample_projections(16, 9, 5);
  for (std::size_t i = 0; i < a.data().size(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
}

TEST(SampleProjections, RejectsEmpty) {
  EXPECT_THROW(sample_projections(0, 3, 1), DimensionError);
  EXPECT_THROW(sample_projections(3, 0, 1), DimensionError);
  EXPECT_THROW(ProjectionSet(2, 1, {1.0, 1.0}), DomainError);
}

TEST(Project, BasisVectorSelectsChannel) {
  std::mt19937_64 rng(1);
  const FeatureMap map = fixtures::random_map(rng, 1, 3, 2, 2);
  const ProjectionSet e1(3, 1, {0.0, 1.0, 0.0});
  const Populations pop = project(map, e1);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_EQ(pop.row(0)[m], map.at(m, 1));
}

TEST(Project, HandComputedDots) {
  const FeatureMap map(1, 2, 3, 1, {1.0, 2.0, -1.0, 0.5, 3.0, -2.0});
  const double s = 1.0 / std::sqrt(2.0);
  const Populations pop = project(map, ProjectionSet(2, 2, {s, s, 0.6, -0.8}));
  const double want[2][3] = {{3.0 * s, -0.5 * s, 1.0 * s}, {0.6 - 1.6, -0.6 - 0.4, 1.8 + 1.6}};
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(pop.row(k)[m], want[k][m], 1e-15);
  }
}

TEST(Project, ConstantRowsAndLinearity) {
  const FeatureMap same(1, 2, 2, 2, {0.3, -0.2, 0.3, -0.2, 0.3, -0.2, 0.3, -0.2});
  const ProjectionSet p = sample_projections(2, 5, 3);
  const Populations pop = project(same, p);
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t m = 1; m < 4; ++m) EXPECT_EQ(pop.row(k)[m], pop.row(k)[0]);
  }
  std::mt19937_64 rng(2);
  const FeatureMap f = fixtures::random_map(rng, 1, 4, 3, 3);
  std::vector<double> scaled(f.data().begin(), f.data().end());
  for (double& v : scaled) v *= 2.5;
  const ProjectionSet q = sample_projections(4, 6, 8);
  const Populations a = project(f, q);
  const Populations b = project(FeatureMap(1, 4, 3, 3, scaled), q);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(b.values[i], 2.5 * a.values[i], 1e-12);
  EXPECT_THROW(project(f, sample_projections(3, 1, 1)), DimensionError);
}

}  // namespace
