#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spdsrc/bench.hpp"
#include "spdsrc/bundle.hpp"
#include "spdsrc/features.hpp"
#include "spdsrc/pnm.hpp"

namespace {

std::pair<int, int> parse_dims(const std::string& text, const std::string& flag) {
  const auto x = text.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= text.size())
    throw spdsrc::Error(flag + ": expected WxH, got '" + text + "'");
  try {
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw spdsrc::Error(flag + ": expected WxH, got '" + text + "'");
  }
}

std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) values.push_back(std::stod(item));
  if (values.empty()) throw spdsrc::Error(flag + ": empty grid");
  return values;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spdsrc::Error(path + ": cannot open file for writing");
  out << text;
  if (!out) throw spdsrc::Error(path + ": write failed");
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

struct BenchFlags {
  std::string bundle_path;
  int train_per_class = 5;
  int trials = 20;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  double gamma = 0.5;
  double mu = 1.0;
  double eps = 1e-6;
  int max_iter = 500;
  std::string weight_metric = "logeuclidean";
  bool normalize_weights = false;
  std::string out_path;
  std::string json_path;
};

void add_bench_flags(CLI::App* cmd, BenchFlags& flags) {
  cmd->add_option("--bundle", flags.bundle_path, "Input SPD bundle file")->required();
  cmd->add_option("--train-per-class", flags.train_per_class,
                  "Training atoms drawn per class");
  cmd->add_option("--trials", flags.trials, "Number of random-split trials");
  cmd->add_option("--seed", flags.seed, "Base RNG seed (trial t uses seed XOR t)");
  cmd->add_option("--mu", flags.mu, "ADMM penalty");
  cmd->add_option("--eps", flags.eps, "ADMM stopping tolerance");
  cmd->add_option("--max-iter", flags.max_iter, "ADMM iteration cap");
  cmd->add_option("--weight-metric", flags.weight_metric,
                  "Weight construction: logeuclidean, stein or none");
  cmd->add_flag("--normalize-weights", flags.normalize_weights,
                "Rescale weights to mean one");
  cmd->add_option("--out", flags.out_path, "Write the CSV report here (default stdout)");
  cmd->add_option("--json", flags.json_path, "Also write a JSON summary here");
}

spdsrc::SolverConfig solver_from(const BenchFlags& flags) {
  spdsrc::SolverConfig config;
  config.lambda = flags.lambda;
  config.mu = flags.mu;
  config.eps = flags.eps;
  config.max_iter = flags.max_iter;
  return config;
}

int run_synth(int classes, int per_class, int dim, double sigma, double sep,
              std::uint64_t seed, const std::string& out_path) {
  const spdsrc::SpdBundle bundle =
      spdsrc::synth_gallery(classes, per_class, dim, sigma, sep, seed);
  spdsrc::save_bundle(bundle, out_path);
  std::cout << "wrote " << bundle.size() << " matrices (d=" << bundle.dim << ", "
            << classes << " classes) to " << out_path << "\n";
  return 0;
}

int run_features(const std::string& variant_name, const std::string& tile_spec,
                 double reg_eps, const std::string& resize_spec,
                 const std::string& labels_spec,
                 const std::vector<std::string>& image_paths,
                 const std::string& out_path) {
  spdsrc::FeatureSpec spec;
  if (variant_name == "gray5")
    spec.variant = spdsrc::FeatureVariant::Gray5;
  else if (variant_name == "color17")
    spec.variant = spdsrc::FeatureVariant::Color17;
  else
    throw spdsrc::Error("--variant must be gray5 or color17");
  spec.reg_epsilon = reg_eps;

  const auto [tile_w, tile_h] = parse_dims(tile_spec, "--tile");

  std::vector<int> labels;
  if (!labels_spec.empty()) {
    for (double v : parse_grid(labels_spec, "--labels"))
      labels.push_back(static_cast<int>(v));
    if (labels.size() != image_paths.size())
      throw spdsrc::Error("--labels count differs from image count");
  } else {
    for (std::size_t i = 0; i < image_paths.size(); ++i)
      labels.push_back(static_cast<int>(i) + 1);
  }

  spdsrc::SpdBundle bundle;
  for (std::size_t i = 0; i < image_paths.size(); ++i) {
    spdsrc::RasterImage img = spdsrc::read_pnm(image_paths[i]);
    if (!resize_spec.empty()) {
      const auto [rw, rh] = parse_dims(resize_spec, "--resize");
      img = spdsrc::box_downsample(img, rw, rh);
    }
    const spdsrc::FeatureField field = spdsrc::feature_stack(img, spec);
    for (const spdsrc::RegionSpec& region : spdsrc::tile(img, tile_w, tile_h)) {
      bundle.matrices.push_back(
          spdsrc::region_covariance(field, region, spec.reg_epsilon));
      bundle.labels.push_back(labels[i]);
    }
  }
  if (bundle.size() == 0) throw spdsrc::Error("features: no descriptors produced");
  bundle.dim = bundle.matrices.front().dim();
  spdsrc::save_bundle(bundle, out_path);
  std::cout << "wrote " << bundle.size() << " descriptors (d=" << bundle.dim
            << ") to " << out_path << "\n";
  return 0;
}

int run_bench(const BenchFlags& flags) {
  const spdsrc::SpdBundle bundle = spdsrc::load_bundle(flags.bundle_path);
  const spdsrc::SplitSpec split{flags.train_per_class, flags.trials, flags.seed};
  const spdsrc::Report report = spdsrc::run_benchmark(
      bundle, split, spdsrc::KernelParams(flags.gamma), solver_from(flags),
      spdsrc::weight_mode_from_string(flags.weight_metric), flags.normalize_weights);
  emit(flags.out_path, spdsrc::report_csv(report));
  if (!flags.json_path.empty()) write_text(flags.json_path, spdsrc::report_json(report));
  return 0;
}

int run_sweep(const BenchFlags& flags, const std::string& lambda_grid_spec,
              const std::string& gamma_grid_spec) {
  const spdsrc::SpdBundle bundle = spdsrc::load_bundle(flags.bundle_path);
  const spdsrc::SplitSpec split{flags.train_per_class, flags.trials, flags.seed};
  const auto points = spdsrc::sweep(
      bundle, split, parse_grid(lambda_grid_spec, "--lambda-grid"),
      parse_grid(gamma_grid_spec, "--gamma-grid"), solver_from(flags),
      spdsrc::weight_mode_from_string(flags.weight_metric), flags.normalize_weights);
  emit(flags.out_path, spdsrc::sweep_csv(points));
  if (!flags.json_path.empty()) write_text(flags.json_path, spdsrc::sweep_json(points));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-covariance feature extraction and sparse representation "
               "classification for SPD-matrix data"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled SPD bundle");
  int classes = 3, per_class = 20, dim = 5;
  double sigma = 0.1, sep = 5.0;
  std::uint64_t synth_seed = 42;
  std::string synth_out;
  synth->add_option("--classes", classes, "Number of classes");
  synth->add_option("--per-class", per_class, "Samples per class");
  synth->add_option("--dim", dim, "Matrix dimension d");
  synth->add_option("--sigma", sigma, "Log-domain noise scale");
  synth->add_option("--sep", sep, "Minimum pairwise centroid separation");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--out", synth_out, "Output bundle path")->required();

  auto* features =
      app.add_subcommand("features", "Turn PGM/PPM images into an SPD bundle of "
                                     "region covariance descriptors");
  std::string variant = "gray5", tile_spec = "32x32", resize_spec, labels_spec,
              features_out;
  double reg_eps = 1e-5;
  std::vector<std::string> image_paths;
  features->add_option("--variant", variant, "Descriptor variant: gray5 or color17");
  features->add_option("--tile", tile_spec, "Tile size WxH");
  features->add_option("--reg-eps", reg_eps, "Covariance regularizer");
  features->add_option("--resize", resize_spec, "Box-downsample images to WxH first");
  features->add_option("--labels", labels_spec,
                       "Comma-separated class label per image (default: image index)");
  features->add_option("--out", features_out, "Output bundle path")->required();
  features->add_option("images", image_paths, "Input images, one class each by default")
      ->required();

  auto* bench = app.add_subcommand("bench", "Run the repeated random-split benchmark");
  BenchFlags bench_flags;
  add_bench_flags(bench, bench_flags);
  bench->add_option("--lambda", bench_flags.lambda, "Data-fit weight")->required();
  bench->add_option("--gamma", bench_flags.gamma, "Kernel scale")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Benchmark over a lambda/gamma grid");
  BenchFlags sweep_flags;
  std::string lambda_grid, gamma_grid;
  add_bench_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--lambda-grid", lambda_grid, "Comma-separated lambda values")
      ->required();
  sweep_cmd->add_option("--gamma-grid", gamma_grid, "Comma-separated gamma values")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return run_synth(classes, per_class, dim, sigma, sep, synth_seed, synth_out);
    if (features->parsed())
      return run_features(variant, tile_spec, reg_eps, resize_spec, labels_spec,
                          image_paths, features_out);
    if (bench->parsed()) return run_bench(bench_flags);
    if (sweep_cmd->parsed()) return run_sweep(sweep_flags, lambda_grid, gamma_grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
