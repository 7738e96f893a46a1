// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0
//
// swdstyle: sliced-Wasserstein distances, image stylization, benchmarking and
// tiled multi-view editing from the command line.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "swdstyle/ebsw.hpp"
#include "swdstyle/engine.hpp"
#include "swdstyle/errors.hpp"
#include "swdstyle/features.hpp"
#include "swdstyle/fmap_io.hpp"
#include "swdstyle/image_io.hpp"
#include "swdstyle/numfmt.hpp"
#include "swdstyle/parallel.hpp"
#include "swdstyle/rng.hpp"
#include "swdstyle/slicing.hpp"
#include "swdstyle/swd_loss.hpp"
#include "swdstyle/tiling.hpp"

namespace {

using namespace swdstyle;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::uint64_t resolve_seed(const std::string& text) {
  std::uint64_t seed = 0;
  if (text == "random") {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  } else {
    try {
      std::size_t used = 0;
      seed = std::stoull(text, &used, 0);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw UsageError("--seed expects an unsigned integer or 'random', got '" + text + "'");
    }
  }
  std::cerr << "seed=" << seed << '\n';
  return seed;
}

Weighting parse_mode(const std::string& mode) {
  if (mode == "uniform") return Weighting::uniform;
  if (mode == "importance") return Weighting::importance;
  throw UsageError("--mode expects uniform or importance, got '" + mode + "'");
}

void apply_threads(std::size_t threads) {
  if (threads > 0) set_max_threads(threads);
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string a, b;
  bool fmap = false;
  bool image = false;
  std::size_t projections = 0;
  double fraction = 0.05;
  std::string mode = "importance";
  std::string seed = std::to_string(kDefaultSeed);
  std::optional<double> p;
  std::size_t threads = 0;
};

std::vector<FeatureMap> load_operand(const std::string& path, bool as_fmap) {
  if (as_fmap) return {read_fmap(path)};
  return extract(load_image(path), ExtractorSpec{});
}

bool looks_like_fmap(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".fmap") == 0;
}

DiscreteMeasure rows_measure(const FeatureMap& map) {
  return DiscreteMeasure(map.channels(), std::vector<double>(map.data().begin(), map.data().end()));
}

int run_compare(const CompareArgs& args) {
  apply_threads(args.threads);
  if (args.fmap && args.image) throw UsageError("--fmap and --image are mutually exclusive");
  const Weighting mode = parse_mode(args.mode);
  const std::uint64_t seed = resolve_seed(args.seed);
  const bool as_fmap = args.fmap || (!args.image && looks_like_fmap(args.a));
  const auto a = load_operand(args.a, as_fmap);
  const auto b = load_operand(args.b, as_fmap);
  if (a.size() != b.size()) throw_dimension("operands have different layer counts");

  struct Row {
    int layer;
    std::size_t k;
    double value;
    std::vector<double> distances, weights;
  };
  std::vector<Row> rows;
  double total = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (a[l].channels() != b[l].channels()) {
      throw_dimension("layer " + std::to_string(a[l].layer_id()) + ": " +
                      std::to_string(a[l].channels()) + " vs " + std::to_string(b[l].channels()) +
                      " channels");
    }
    const std::size_t k = args.projections > 0 ? args.projections
                                               : projection_budget(a[l].channels(), args.fraction);
    const ProjectionSet proj = sample_projections(
        a[l].channels(), k, derive_seed({seed, static_cast<std::uint64_t>(a[l].layer_id())}));
    Row row{a[l].layer_id(), k, 0.0, {}, {}};
    if (args.p) {
      const DiscreteMeasure mu = rows_measure(a[l]);
      const DiscreteMeasure nu = rows_measure(b[l]);
      if (mode == Weighting::uniform) {
        row.value = sw_hat_with(mu, nu, *args.p, proj);
      } else {
        EbswResult r = is_ebsw_with(mu, nu, *args.p, proj, EnergyFunction::exponential());
        row.value = r.value;
        row.distances = std::move(r.distances);
        row.weights = std::move(r.weights);
      }
    } else {
      SwdResult r = mode == Weighting::uniform ? swd(a[l], b[l], proj) : iw_swd(a[l], b[l], proj);
      row.value = r.value;
      row.distances = std::move(r.distances);
      row.weights = std::move(r.weights);
    }
    total += row.value;
    rows.push_back(std::move(row));
  }
  std::cout << "layer,projections,value\n";
  for (const auto& r : rows) std::cout << r.layer << ',' << r.k << ',' << fmt9(r.value) << '\n';
  std::cout << "total,," << fmt9(total) << '\n';
  if (mode == Weighting::importance) {
    std::cout << "\nlayer,projection,distance,weight\n";
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.weights.size(); ++k) {
        std::cout << r.layer << ',' << k << ',' << fmt9(r.distances[k]) << ','
                  << fmt9(r.weights[k]) << '\n';
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stylize

struct StylizeArgs {
  std::string content;
  std::vector<std::string> styles;
  std::string mask, style_mask;
  std::optional<int> exclude_label;
  std::size_t iters = 1000;
  double lr = 0.02;
  std::string mode = "importance";
  double fraction = 0.05;
  double content_weight = 0.1;
  std::string out;
  std::string trace;
  std::string seed = std::to_string(kDefaultSeed);
  std::size_t threads = 0;
};

int run_stylize(const StylizeArgs& args) {
  apply_threads(args.threads);
  StylizeJob job;
  job.loss.mode = parse_mode(args.mode);
  job.loss.projection_fraction = args.fraction;
  job.loss.content_weight = args.content_weight;
  job.loss.exclude_label = args.exclude_label;
  job.iterations = args.iters;
  job.learning_rate = args.lr;
  job.seed = resolve_seed(args.seed);
  job.content = load_image(args.content);
  for (const auto& s : args.styles) job.styles.push_back(load_image(s));
  if (!args.mask.empty()) job.content_mask = load_mask(args.mask);
  if (!args.style_mask.empty()) job.style_mask = load_mask(args.style_mask);

  const StylizeResult result = stylize(job);
  save_image(result.image, args.out);
  if (!args.trace.empty()) write_trace_csv(result.trace, args.trace);
  const auto& first = result.trace.rows.front();
  const auto& last = result.trace.rows.back();
  std::cout << "iterations=" << result.trace.rows.size() << '\n'
            << "initial_loss=" << fmt9(first.total) << '\n'
            << "final_loss=" << fmt9(last.total) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string content, style, out;
  std::size_t iters = 1500;
  double lr = 0.02;
  double fraction = 0.05;
  std::string seed = std::to_string(kDefaultSeed);
  std::size_t threads = 0;
};

int run_bench(const BenchArgs& args) {
  apply_threads(args.threads);
  StylizeJob job;
  job.iterations = args.iters;
  job.learning_rate = args.lr;
  job.seed = resolve_seed(args.seed);
  job.content = load_image(args.content);
  job.styles.push_back(load_image(args.style));
  const BenchmarkResult r = benchmark_iw_vs_vanilla(job, args.fraction);
  write_benchmark(r, args.out);
  std::cout << "uniform_final_loss=" << fmt9(r.uniform.final_loss) << '\n'
            << "importance_final_loss=" << fmt9(r.importance.final_loss) << '\n'
            << "relative_gap=" << fmt9(r.relative_gap) << '\n'
            << "uniform_final_eval=" << fmt9(r.uniform.final_eval) << '\n'
            << "importance_final_eval=" << fmt9(r.importance.final_eval) << '\n'
            << "eval_gap=" << fmt9(r.eval_gap) << '\n';
  std::cerr << "uniform_mean_loss_ms=" << fmt9(r.uniform.mean_loss_ms) << '\n'
            << "importance_mean_loss_ms=" << fmt9(r.importance.mean_loss_ms) << '\n'
            << "speedup=" << fmt9(r.speedup) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tile

struct TileArgs {
  std::string views, prompt, stylizer = "identity", out;
  std::string seed = std::to_string(kDefaultSeed);
  std::size_t threads = 0;
};

int run_tile(const TileArgs& args) {
  apply_threads(args.threads);
  if (args.stylizer != "identity" && args.stylizer != "palette" && args.stylizer != "adain") {
    throw UsageError("--stylizer expects identity, palette or adain, got '" + args.stylizer + "'");
  }
  const std::uint64_t seed = resolve_seed(args.seed);
  const auto stylizer = make_stylizer(args.stylizer);
  const ViewSet views = read_view_dir(args.views);
  const ViewSet outputs = run_multiview_edit(views, args.prompt, *stylizer, seed);
  write_view_outputs(outputs, args.views, args.out, args.prompt, seed);
  std::cout << "views=" << outputs.size() << '\n';
  return kExitOk;
}

constexpr const char* kFooter = R"(CSV formats:
  compare:  layer,projections,value   (one row per layer, then total,,<sum>)
            followed in importance mode by a blank line and
            layer,projection,distance,weight
  --trace / bench: iteration,total,layer_<id>...,ms,loss_ms
Numbers are printed with 9 significant digits. The resolved seed is printed
to stderr. SWDSTYLE_THREADS mirrors --threads.
Exit codes: 0 success, 1 domain/dimension error, 2 usage or format error.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced-Wasserstein style toolkit"};
  app.footer(kFooter);
  app.require_subcommand(1);

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Sliced Wasserstein distance between two inputs");
  compare->add_option("a", cmp.a, "First input (.fmap or image)")->required();
  compare->add_option("b", cmp.b, "Second input (.fmap or image)")->required();
  compare->add_flag("--fmap", cmp.fmap, "Inputs are FMAP feature files");
  compare->add_flag("--image", cmp.image, "Inputs are images (compared on extractor taps)");
  compare->add_option("--projections", cmp.projections, "Directions per layer (overrides --proj-frac)");
  compare->add_option("--proj-frac", cmp.fraction, "Directions per layer as a fraction of channels");
  compare->add_option("--mode", cmp.mode, "uniform | importance");
  compare->add_option("--seed", cmp.seed, "Seed, or 'random'");
  compare->add_option("--p", cmp.p, "Wasserstein order; selects the sliced / energy-based estimators");
  compare->add_option("--threads", cmp.threads, "Worker cap");

  StylizeArgs sty;
  auto* stylize_cmd = app.add_subcommand("stylize", "Optimize an image towards style statistics");
  stylize_cmd->add_option("--content", sty.content, "Content image")->required();
  stylize_cmd->add_option("--style", sty.styles, "Style image; repeat for one style per mask label")->required();
  stylize_cmd->add_option("--mask", sty.mask, "Content label mask (PNG/PGM)");
  stylize_cmd->add_option("--style-mask", sty.style_mask, "Style label mask (single style)");
  stylize_cmd->add_option("--exclude-label", sty.exclude_label, "Mask label left untouched");
  stylize_cmd->add_option("--iters", sty.iters, "Iterations");
  stylize_cmd->add_option("--lr", sty.lr, "Step size");
  stylize_cmd->add_option("--mode", sty.mode, "uniform | importance");
  stylize_cmd->add_option("--proj-frac", sty.fraction, "Projection budget fraction");
  stylize_cmd->add_option("--content-weight", sty.content_weight, "Content loss weight");
  stylize_cmd->add_option("--out", sty.out, "Output image (PNG)")->required();
  stylize_cmd->add_option("--trace", sty.trace, "Per-iteration loss trace (CSV)");
  stylize_cmd->add_option("--seed", sty.seed, "Seed, or 'random'");
  stylize_cmd->add_option("--threads", sty.threads, "Worker cap");

  BenchArgs bch;
  auto* bench = app.add_subcommand("bench", "Uniform full-budget vs importance-weighted reduced-budget runs");
  bench->add_option("--content", bch.content, "Content image")->required();
  bench->add_option("--style", bch.style, "Style image")->required();
  bench->add_option("--iters", bch.iters, "Iterations per run");
  bench->add_option("--lr", bch.lr, "Step size");
  bench->add_option("--proj-frac", bch.fraction, "Budget of the importance-weighted run");
  bench->add_option("--out", bch.out, "Output directory")->required();
  bench->add_option("--seed", bch.seed, "Seed, or 'random'");
  bench->add_option("--threads", bch.threads, "Worker cap");

  TileArgs til;
  auto* tile = app.add_subcommand("tile", "Tiled-reference multi-view editing");
  tile->add_option("--views", til.views, "Directory of <id>_image.png / <id>_depth.png")->required();
  tile->add_option("--prompt", til.prompt, "Text prompt passed to the stylizer");
  tile->add_option("--stylizer", til.stylizer, "identity | palette | adain");
  tile->add_option("--seed", til.seed, "Seed, or 'random'");
  tile->add_option("--out", til.out, "Output directory")->required();
  tile->add_option("--threads", til.threads, "Worker cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*compare) return run_compare(cmp);
    if (*stylize_cmd) return run_stylize(sty);
    if (*bench) return run_bench(bch);
    if (*tile) return run_tile(til);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
