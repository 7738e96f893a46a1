// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "cli_runner.hpp"
#include "fixtures.hpp"
#include "swdstyle/fmap_io.hpp"
#include "swdstyle/image_io.hpp"

namespace {

using cli::quote;

std::string bundled(const std::string& name) { return quote(fixtures::bundled(name).string()); }

std::string golden() { return quote(std::string(SWDSTYLE_TEST_DATA) + "/golden_layer3.fmap"); }

double total_of(const std::string& out) {
  const auto pos = out.find("total,,");
  if (pos == std::string::npos) return -1.0;
  return std::stod(out.substr(pos + 7));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli::run("").exit_code, 2);
  EXPECT_EQ(cli::run("compare").exit_code, 2);
  EXPECT_EQ(cli::run("stylize --content x.png").exit_code, 2);
  EXPECT_EQ(cli::run("compare a b --bogus").exit_code, 2);
  EXPECT_EQ(cli::run("--help").exit_code, 0);
}

TEST(Cli, CompareSelfIsZero) {
  const auto o = cli::run("compare " + golden() + " " + golden());
  ASSERT_EQ(o.exit_code, 0) << o.err;
  EXPECT_NE(o.out.find("layer,projections,value"), std::string::npos);
  EXPECT_NE(o.out.find("total,,0\n"), std::string::npos) << o.out;
  EXPECT_NE(o.err.find("seed="), std::string::npos);
}

TEST(Cli, CompareImagesImportanceBoundsUniform) {
  const std::string pair = bundled("content.png") + " " + bundled("style.png");
  const auto u = cli::run("compare " + pair + " --mode uniform --proj-frac 0.25");
  const auto i = cli::run("compare " + pair + " --mode importance --proj-frac 0.25");
  ASSERT_EQ(u.exit_code, 0) << u.err;
  ASSERT_EQ(i.exit_code, 0) << i.err;
  EXPECT_GE(total_of(i.out), total_of(u.out));
  EXPECT_NE(i.out.find("layer,projection,distance,weight"), std::string::npos);
  const auto p1 = cli::run("compare " + pair + " --mode importance --p 1 --projections 8");
  EXPECT_EQ(p1.exit_code, 0) << p1.err;
}

TEST(Cli, DomainAndFormatErrors) {
  const auto dir = fixtures::temp_dir("cli_errors");
  {
    std::ofstream(dir / "junk.fmap") << "not a feature map";
  }
  EXPECT_EQ(cli::run("compare " + quote((dir / "junk.fmap").string()) + " " + golden()).exit_code,
            2);
  EXPECT_EQ(cli::run("compare " + quote((dir / "missing.png").string()) + " " +
                     bundled("style.png"))
                .exit_code,
            1);
  EXPECT_EQ(cli::run("compare " + golden() + " " + golden() + " --mode sideways").exit_code, 2);
  EXPECT_EQ(cli::run("tile --views " + quote(dir.string()) + " --stylizer oil --out " +
                     quote(dir.string()))
                .exit_code,
            2);
  // Two styles against a two-label mask with one label excluded: one style too many.
  const auto o = cli::run("stylize --content " + bundled("content.png") + " --style " +
                          bundled("style.png") + " --style " + bundled("style_b.png") +
                          " --mask " + bundled("mask_lr.png") + " --exclude-label 0 --iters 1 --out " +
                          quote((dir / "o.png").string()));
  EXPECT_EQ(o.exit_code, 1);
}

TEST(Cli, StylizeWritesImageAndTrace) {
  const auto dir = fixtures::temp_dir("cli_stylize");
  const auto o = cli::run("stylize --content " + bundled("content.png") + " --style " +
                          bundled("style.png") + " --iters 3 --out " +
                          quote((dir / "o.png").string()) + " --trace " +
                          quote((dir / "t.csv").string()));
  ASSERT_EQ(o.exit_code, 0) << o.err;
  EXPECT_NE(o.out.find("final_loss="), std::string::npos);
  EXPECT_EQ(swdstyle::load_image(dir / "o.png").height(), 32u);
  const std::string csv = cli::slurp((dir / "t.csv").string());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Cli, TileIdentityAndMissingPairs) {
  std::mt19937_64 rng(1);
  const auto views = fixtures::temp_dir("cli_views");
  std::vector<swdstyle::ImageBuffer> images;
  for (int i = 0; i < 5; ++i) {
    images.push_back(fixtures::random_image_8bit(rng, 8, 8));
    swdstyle::save_image(images.back(), views / ("v" + std::to_string(i) + "_image.png"));
    swdstyle::save_image(fixtures::random_image_8bit(rng, 8, 8, 1),
                         views / ("v" + std::to_string(i) + "_depth.png"));
  }
  const auto out = fixtures::temp_dir("cli_views_out");
  const auto o = cli::run("tile --views " + quote(views.string()) +
                          " --prompt 'a red house' --stylizer identity --out " + quote(out.string()));
  ASSERT_EQ(o.exit_code, 0) << o.err;
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(swdstyle::load_image(out / ("v" + std::to_string(i) + "_stylized.png")), images[i]);
  }
  std::filesystem::remove(views / "v3_depth.png");
  const auto bad = cli::run("tile --views " + quote(views.string()) + " --out " + quote(out.string()));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.err.find("v3"), std::string::npos);
}

}  // namespace
