#pragma once

#include <span>
#include <vector>

#include "spdsrc/kernel.hpp"
#include "spdsrc/solver.hpp"

namespace spdsrc {

/// Which dissimilarity feeds the per-atom l1 weights. None yields w = 1
/// exactly and recovers unweighted kernel sparse coding.
enum class WeightMode { LogEuclidean, Stein, None };

struct ClassRange {
  int label = 0;
  Index begin = 0;
  Index end = 0;  // one past the last atom of the class
};

/// Training atoms sorted by class label so every class occupies one
/// contiguous index range. Class ids must be exactly 1..n with no empty
/// class. Immutable after construction.
class LabeledGallery {
 public:
  LabeledGallery(std::vector<SpdMatrix> atoms, std::vector<int> labels);

  Index size() const { return static_cast<Index>(atoms_.size()); }
  int n_classes() const { return static_cast<int>(ranges_.size()); }
  Index dim() const { return atoms_.front().dim(); }
  const std::vector<SpdMatrix>& atoms() const { return atoms_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<ClassRange>& class_ranges() const { return ranges_; }

 private:
  std::vector<SpdMatrix> atoms_;
  std::vector<int> labels_;
  std::vector<ClassRange> ranges_;
};

struct ClassificationResult {
  int label = 0;
  Eigen::VectorXd residuals;  // per class, index = class id - 1
  SparseCode code;
  Eigen::VectorXd weights;
};

/// Per-atom weights w_i from the dissimilarity between the query and atom i:
/// the Log-Euclidean distance, the Stein distance sqrt(J), or all ones.
/// Weights are used raw; mean-one normalization is optional and off by
/// default.
Eigen::VectorXd compute_weights(const SpdMatrix& x, const LabeledGallery& gallery,
                                WeightMode mode, bool normalize_mean_one = false);

/// Residual of one class in the whitened domain,
/// 1/2 ||xbar - Dbar c_j||_2^2 with c_j equal to the code masked to the
/// class's index range.
double class_residual(const SparseCode& code, const GramFactorization& fact,
                      const Eigen::Ref<const Eigen::VectorXd>& xbar,
                      const ClassRange& range);

/// Smallest-residual class id, ties broken toward the smallest id.
int argmin_label(const Eigen::Ref<const Eigen::VectorXd>& residuals);

/// Full decision path for one query: build weights, sparse-code the query
/// against the whitened dictionary, score every class by its residual, and
/// return the minimum-residual label.
ClassificationResult classify(const SpdMatrix& x, const LabeledGallery& gallery,
                              const GramFactorization& fact,
                              const KernelParams& params, const SolverConfig& config,
                              WeightMode mode, bool normalize_weights = false);

/// Fraction of probes classified into their ground-truth class. Builds the
/// Gram factorization of the gallery once and reuses it for every probe.
double evaluate(const LabeledGallery& gallery, const LabeledGallery& probes,
                const KernelParams& params, const SolverConfig& config,
                WeightMode mode, bool normalize_weights = false);

}  // namespace spdsrc
