#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spdsrc/bundle.hpp"
#include "spdsrc/classifier.hpp"

namespace spdsrc {

/// Repeated stratified random split protocol: per trial, train_per_class
/// atoms are drawn from each class without replacement and the rest are
/// probes.
struct SplitSpec {
  int train_per_class = 1;
  int trials = 1;
  std::uint64_t seed = 0;
};

/// Full configuration echo carried by every report.
struct BenchConfig {
  double lambda = 1.0;
  double gamma = 0.5;
  double mu = 1.0;
  double eps = 1e-6;
  int max_iter = 500;
  WeightMode mode = WeightMode::LogEuclidean;
  bool normalize_weights = false;
  std::uint64_t seed = 0;
  int train_per_class = 1;
  int trials = 1;
};

struct Report {
  BenchConfig config;
  std::vector<double> per_trial;  // accuracies as fractions in [0, 1]
  double mean_accuracy = 0.0;
};

const char* to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& name);

/// CSV rows `trial,accuracy` followed by a `mean,<value>` summary line.
/// Values carry 17 significant digits so reports are byte-reproducible.
std::string report_csv(const Report& report);

/// Structured summary with the full configuration echo.
std::string report_json(const Report& report);

/// Synthetic multi-cluster gallery: class centroids are random symmetric
/// matrices rescaled until pairwise Frobenius separation reaches
/// centroid_sep; samples are exp(centroid + sigma * E) with E a random
/// symmetric perturbation. Deterministic for a fixed seed.
SpdBundle synth_gallery(int n_classes, int per_class, Index d, double sigma,
                        double centroid_sep, std::uint64_t seed);

/// Per-class draw of train_per_class indices without replacement; returns
/// (train, test) index lists into the label array.
std::pair<std::vector<Index>, std::vector<Index>> stratified_split(
    const std::vector<int>& labels, int train_per_class, std::mt19937_64& rng);

/// Run the full protocol: trial t derives its RNG from seed XOR t, splits,
/// fits the Gram factorization on the training atoms, classifies the rest.
Report run_benchmark(const SpdBundle& bundle, const SplitSpec& split,
                     const KernelParams& kernel, const SolverConfig& solver,
                     WeightMode mode, bool normalize_weights = false);

struct SweepPoint {
  double lambda = 0.0;
  double gamma = 0.0;
  Report report;
};

/// One run_benchmark per (lambda, gamma) grid point, lambda outer.
std::vector<SweepPoint> sweep(const SpdBundle& bundle, const SplitSpec& split,
                              const std::vector<double>& lambda_grid,
                              const std::vector<double>& gamma_grid,
                              const SolverConfig& solver_base, WeightMode mode,
                              bool normalize_weights = false);

/// Curve table `lambda,gamma,mean_accuracy` for plotting.
std::string sweep_csv(const std::vector<SweepPoint>& points);

/// Structured sweep output: one full report per grid point.
std::string sweep_json(const std::vector<SweepPoint>& points);

}  // namespace spdsrc
