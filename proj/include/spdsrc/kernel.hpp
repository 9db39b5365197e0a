#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "spdsrc/spd.hpp"

namespace spdsrc {

/// Inverse squared-distance scale of the Log-Euclidean Gaussian kernel.
struct KernelParams {
  explicit KernelParams(double gamma_in) : gamma(gamma_in) {
    if (!(gamma > 0.0)) throw Error("KernelParams: gamma must be positive");
  }
  double gamma;
};

/// kappa_g(X, Y) = exp(-gamma ||log X - log Y||_F^2), in (0, 1].
template <typename DerivedX, typename DerivedY>
double kernel_eval(const Eigen::MatrixBase<DerivedX>& x,
                   const Eigen::MatrixBase<DerivedY>& y, const KernelParams& params) {
  detail::require_same_dim(y, x.rows(), x.cols(), "kernel_eval");
  return std::exp(-params.gamma * (matrix_log(x) - matrix_log(y)).squaredNorm());
}

inline double kernel_eval(const SpdMatrix& x, const SpdMatrix& y,
                          const KernelParams& params) {
  return kernel_eval(x.m(), y.m(), params);
}

/// Kernel Gram matrix of a gallery together with its truncated
/// eigendecomposition K = U Sigma U^T and the whitened dictionary
/// Dbar = Sigma^{1/2} U^T, which satisfies Dbar^T Dbar = K on the retained
/// subspace. Matrix logarithms of the atoms are cached so Gram assembly and
/// query embedding never repeat an eigendecomposition per pair.
struct GramFactorization {
  Index n_atoms = 0;
  Eigen::MatrixXd gram;           // N x N, unit diagonal
  Eigen::MatrixXd eig_vectors;    // N x r
  Eigen::VectorXd eig_values;     // length r, descending, all above rank_tol
  Eigen::MatrixXd whitened_dict;  // r x N
  std::vector<Eigen::MatrixXd> log_atoms;

  Index rank() const { return eig_values.size(); }
  Index atom_dim() const { return log_atoms.empty() ? 0 : log_atoms.front().rows(); }
};

/// Assemble and factorize the Gram matrix of a gallery. Eigenvalues at or
/// below N * machine_epsilon * lambda_max are truncated.
GramFactorization factorize(std::span<const SpdMatrix> gallery,
                            const KernelParams& params);

/// Kernel evaluations kappa(X, Y_i) against every cached atom.
Eigen::VectorXd kernel_column(const Eigen::MatrixXd& query_log,
                              const GramFactorization& fact,
                              const KernelParams& params);

/// Whitened query embedding xbar = Sigma^{-1/2} U^T kappa(X, gallery); with
/// Dbar = Sigma^{1/2} U^T this satisfies Dbar^T xbar = kappa(X, gallery) on
/// the retained subspace.
Eigen::VectorXd embed_query(const SpdMatrix& x, const GramFactorization& fact,
                            const KernelParams& params);

/// Same as embed_query but reuses a precomputed matrix logarithm of the query.
Eigen::VectorXd embed_query_log(const Eigen::MatrixXd& query_log,
                                const GramFactorization& fact,
                                const KernelParams& params);

}  // namespace spdsrc
