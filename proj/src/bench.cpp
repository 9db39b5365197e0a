#include "spdsrc/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

using Eigen::Index;
using Eigen::MatrixXd;

namespace spdsrc {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MatrixXd random_symmetric(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  MatrixXd s(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) {
      const double g = gauss(rng);
      s(i, j) = g;
      s(j, i) = g;
    }
  return s;
}

}  // namespace

const char* to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::LogEuclidean:
      return "logeuclidean";
    case WeightMode::Stein:
      return "stein";
    case WeightMode::None:
      return "none";
  }
  return "unknown";
}

WeightMode weight_mode_from_string(const std::string& name) {
  if (name == "logeuclidean") return WeightMode::LogEuclidean;
  if (name == "stein") return WeightMode::Stein;
  if (name == "none") return WeightMode::None;
  throw Error("unknown weight metric '" + name +
              "' (expected logeuclidean, stein or none)");
}

std::string report_csv(const Report& report) {
  std::ostringstream out;
  out << "trial,accuracy\n";
  for (std::size_t t = 0; t < report.per_trial.size(); ++t)
    out << (t + 1) << ',' << fmt17(report.per_trial[t]) << '\n';
  out << "mean," << fmt17(report.mean_accuracy) << '\n';
  return out.str();
}

std::string report_json(const Report& report) {
  nlohmann::json j;
  j["config"] = {{"lambda", report.config.lambda},
                 {"gamma", report.config.gamma},
                 {"mu", report.config.mu},
                 {"eps", report.config.eps},
                 {"max_iter", report.config.max_iter},
                 {"weight_metric", to_string(report.config.mode)},
                 {"normalize_weights", report.config.normalize_weights},
                 {"seed", report.config.seed},
                 {"train_per_class", report.config.train_per_class},
                 {"trials", report.config.trials}};
  j["per_trial"] = report.per_trial;
  j["mean_accuracy"] = report.mean_accuracy;
  return j.dump(2) + "\n";
}

SpdBundle synth_gallery(int n_classes, int per_class, Index d, double sigma,
                        double centroid_sep, std::uint64_t seed) {
  if (n_classes < 1 || per_class < 1 || d < 1)
    throw ValidationError("synth_gallery: counts and dimension must be positive");
  if (sigma < 0.0 || centroid_sep <= 0.0)
    throw ValidationError("synth_gallery: sigma must be >= 0 and separation > 0");

  std::mt19937_64 rng(seed);
  std::vector<MatrixXd> centroids;
  centroids.reserve(static_cast<std::size_t>(n_classes));
  for (int k = 0; k < n_classes; ++k) centroids.push_back(random_symmetric(d, rng));

  if (n_classes >= 2) {
    double min_dist = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_classes; ++a)
      for (int b = a + 1; b < n_classes; ++b)
        min_dist = std::min(min_dist, (centroids[a] - centroids[b]).norm());
    if (!(min_dist > 0.0))
      throw Error("synth_gallery: degenerate centroid draw");
    if (min_dist < centroid_sep) {
      const double scale = centroid_sep / min_dist;
      for (auto& c : centroids) c *= scale;
    }
  }

  SpdBundle bundle;
  bundle.dim = d;
  for (int k = 0; k < n_classes; ++k)
    for (int s = 0; s < per_class; ++s) {
      const MatrixXd noise = random_symmetric(d, rng);
      bundle.matrices.emplace_back(matrix_exp(centroids[k] + sigma * noise));
      bundle.labels.push_back(k + 1);
    }
  return bundle;
}

std::pair<std::vector<Index>, std::vector<Index>> stratified_split(
    const std::vector<int>& labels, int train_per_class, std::mt19937_64& rng) {
  std::map<int, std::vector<Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<Index>(i));

  for (const auto& [label, idx] : by_class)
    if (train_per_class < 1 || static_cast<std::size_t>(train_per_class) >= idx.size())
      throw ValidationError(
          "stratified_split: train_per_class must be positive and below the "
          "smallest class size");

  std::vector<Index> train, test;
  for (auto& [label, idx] : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    train.insert(train.end(), idx.begin(), idx.begin() + train_per_class);
    test.insert(test.end(), idx.begin() + train_per_class, idx.end());
  }
  return {std::move(train), std::move(test)};
}

Report run_benchmark(const SpdBundle& bundle, const SplitSpec& split,
                     const KernelParams& kernel, const SolverConfig& solver,
                     WeightMode mode, bool normalize_weights) {
  if (split.trials < 1) throw ValidationError("run_benchmark: trials must be positive");

  Report report;
  report.config = {solver.lambda, kernel.gamma,       solver.mu,
                   solver.eps,    solver.max_iter,    mode,
                   normalize_weights, split.seed,     split.train_per_class,
                   split.trials};
  report.per_trial.reserve(static_cast<std::size_t>(split.trials));

  for (int t = 0; t < split.trials; ++t) {
    try {
      std::mt19937_64 rng(split.seed ^ static_cast<std::uint64_t>(t));
      const auto [train_idx, test_idx] =
          stratified_split(bundle.labels, split.train_per_class, rng);

      std::vector<SpdMatrix> train_atoms, test_atoms;
      std::vector<int> train_labels, test_labels;
      for (Index i : train_idx) {
        train_atoms.push_back(bundle.matrices[static_cast<std::size_t>(i)]);
        train_labels.push_back(bundle.labels[static_cast<std::size_t>(i)]);
      }
      for (Index i : test_idx) {
        test_atoms.push_back(bundle.matrices[static_cast<std::size_t>(i)]);
        test_labels.push_back(bundle.labels[static_cast<std::size_t>(i)]);
      }
      const LabeledGallery gallery(std::move(train_atoms), std::move(train_labels));
      const LabeledGallery probes(std::move(test_atoms), std::move(test_labels));
      report.per_trial.push_back(
          evaluate(gallery, probes, kernel, solver, mode, normalize_weights));
    } catch (const Error& e) {
      throw Error("trial " + std::to_string(t + 1) + ": " + e.what());
    }
  }

  double total = 0.0;
  for (double acc : report.per_trial) total += acc;
  report.mean_accuracy = total / double(report.per_trial.size());
  return report;
}

std::vector<SweepPoint> sweep(const SpdBundle& bundle, const SplitSpec& split,
                              const std::vector<double>& lambda_grid,
                              const std::vector<double>& gamma_grid,
                              const SolverConfig& solver_base, WeightMode mode,
                              bool normalize_weights) {
  if (lambda_grid.empty() || gamma_grid.empty())
    throw ValidationError("sweep: parameter grids must be nonempty");
  std::vector<SweepPoint> points;
  points.reserve(lambda_grid.size() * gamma_grid.size());
  for (double lambda : lambda_grid)
    for (double gamma : gamma_grid) {
      SolverConfig solver = solver_base;
      solver.lambda = lambda;
      points.push_back({lambda, gamma,
                        run_benchmark(bundle, split, KernelParams(gamma), solver, mode,
                                      normalize_weights)});
    }
  return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "lambda,gamma,mean_accuracy\n";
  for (const SweepPoint& p : points)
    out << fmt17(p.lambda) << ',' << fmt17(p.gamma) << ','
        << fmt17(p.report.mean_accuracy) << '\n';
  return out.str();
}

std::string sweep_json(const std::vector<SweepPoint>& points) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepPoint& p : points)
    arr.push_back(nlohmann::json::parse(report_json(p.report)));
  return arr.dump(2) + "\n";
}

}  // namespace spdsrc
