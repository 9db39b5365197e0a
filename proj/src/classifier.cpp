#include "spdsrc/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace spdsrc {

LabeledGallery::LabeledGallery(std::vector<SpdMatrix> atoms, std::vector<int> labels) {
  if (atoms.empty()) throw ValidationError("LabeledGallery: no atoms");
  if (atoms.size() != labels.size())
    throw ValidationError("LabeledGallery: atoms and labels differ in length");
  const Index d = atoms.front().dim();
  for (const SpdMatrix& atom : atoms)
    if (atom.dim() != d)
      throw DimensionMismatch("LabeledGallery: atoms have mixed dimensions");

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });

  atoms_.reserve(atoms.size());
  labels_.reserve(labels.size());
  for (std::size_t idx : order) {
    atoms_.push_back(std::move(atoms[idx]));
    labels_.push_back(labels[idx]);
  }

  for (Index i = 0; i < size(); ++i) {
    if (ranges_.empty() || ranges_.back().label != labels_[static_cast<std::size_t>(i)])
      ranges_.push_back({labels_[static_cast<std::size_t>(i)], i, i + 1});
    else
      ranges_.back().end = i + 1;
  }
  for (std::size_t k = 0; k < ranges_.size(); ++k)
    if (ranges_[k].label != static_cast<int>(k) + 1)
      throw ValidationError(
          "LabeledGallery: class ids must be exactly 1..n with no empty class");
}

namespace {

VectorXd weights_from_logs(const MatrixXd& query_log,
                           std::span<const MatrixXd> atom_logs) {
  VectorXd w(static_cast<Index>(atom_logs.size()));
  for (Index i = 0; i < w.size(); ++i)
    w(i) = (atom_logs[static_cast<std::size_t>(i)] - query_log).norm();
  return w;
}

VectorXd stein_weights(const SpdMatrix& x, std::span<const SpdMatrix> atoms) {
  VectorXd w(static_cast<Index>(atoms.size()));
  for (Index i = 0; i < w.size(); ++i)
    w(i) = stein_distance(atoms[static_cast<std::size_t>(i)], x);
  return w;
}

void normalize_to_mean_one(VectorXd& w) {
  const double total = w.sum();
  if (total > 0.0) w *= double(w.size()) / total;
}

}  // namespace

VectorXd compute_weights(const SpdMatrix& x, const LabeledGallery& gallery,
                         WeightMode mode, bool normalize_mean_one) {
  if (x.dim() != gallery.dim())
    throw DimensionMismatch("compute_weights: query dimension differs from gallery");
  VectorXd w;
  switch (mode) {
    case WeightMode::None:
      return VectorXd::Ones(gallery.size());
    case WeightMode::LogEuclidean: {
      std::vector<MatrixXd> atom_logs;
      atom_logs.reserve(static_cast<std::size_t>(gallery.size()));
      for (const SpdMatrix& atom : gallery.atoms())
        atom_logs.push_back(matrix_log(atom.m()));
      w = weights_from_logs(matrix_log(x.m()), atom_logs);
      break;
    }
    case WeightMode::Stein:
      w = stein_weights(x, gallery.atoms());
      break;
  }
  if (normalize_mean_one) normalize_to_mean_one(w);
  return w;
}

double class_residual(const SparseCode& code, const GramFactorization& fact,
                      const Eigen::Ref<const VectorXd>& xbar, const ClassRange& range) {
  if (code.c.size() != fact.n_atoms)
    throw DimensionMismatch("class_residual: code length differs from gallery size");
  if (range.begin < 0 || range.end > fact.n_atoms || range.begin >= range.end)
    throw DimensionMismatch("class_residual: class range out of bounds");
  const Index len = range.end - range.begin;
  const VectorXd residual =
      xbar - fact.whitened_dict.middleCols(range.begin, len) * code.c.segment(range.begin, len);
  return 0.5 * residual.squaredNorm();
}

int argmin_label(const Eigen::Ref<const VectorXd>& residuals) {
  Index best = 0;
  for (Index j = 1; j < residuals.size(); ++j)
    if (residuals(j) < residuals(best)) best = j;
  return static_cast<int>(best) + 1;
}

ClassificationResult classify(const SpdMatrix& x, const LabeledGallery& gallery,
                              const GramFactorization& fact, const KernelParams& params,
                              const SolverConfig& config, WeightMode mode,
                              bool normalize_weights) {
  if (x.dim() != gallery.dim())
    throw DimensionMismatch("classify: query dimension differs from gallery");
  if (fact.n_atoms != gallery.size() || fact.atom_dim() != gallery.dim())
    throw DimensionMismatch("classify: factorization does not match gallery");

  const MatrixXd query_log = matrix_log(x.m());

  ClassificationResult result;
  switch (mode) {
    case WeightMode::None:
      result.weights = VectorXd::Ones(gallery.size());
      break;
    case WeightMode::LogEuclidean:
      result.weights = weights_from_logs(query_log, fact.log_atoms);
      break;
    case WeightMode::Stein:
      result.weights = stein_weights(x, gallery.atoms());
      break;
  }
  if (normalize_weights) normalize_to_mean_one(result.weights);

  const VectorXd xbar = embed_query_log(query_log, fact, params);
  result.code = solve(xbar, fact.whitened_dict, result.weights, config);

  result.residuals.resize(gallery.n_classes());
  for (const ClassRange& range : gallery.class_ranges())
    result.residuals(range.label - 1) = class_residual(result.code, fact, xbar, range);
  result.label = argmin_label(result.residuals);
  return result;
}

double evaluate(const LabeledGallery& gallery, const LabeledGallery& probes,
                const KernelParams& params, const SolverConfig& config, WeightMode mode,
                bool normalize_weights) {
  if (gallery.dim() != probes.dim())
    throw DimensionMismatch("evaluate: probe dimension differs from gallery");
  const GramFactorization fact = factorize(gallery.atoms(), params);
  Index correct = 0;
  for (Index i = 0; i < probes.size(); ++i) {
    const ClassificationResult result =
        classify(probes.atoms()[static_cast<std::size_t>(i)], gallery, fact, params,
                 config, mode, normalize_weights);
    if (result.label == probes.labels()[static_cast<std::size_t>(i)]) ++correct;
  }
  return double(correct) / double(probes.size());
}

}  // namespace spdsrc
