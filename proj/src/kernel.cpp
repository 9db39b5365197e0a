#include "spdsrc/kernel.hpp"

#include <limits>

namespace spdsrc {

GramFactorization factorize(std::span<const SpdMatrix> gallery,
                            const KernelParams& params) {
  if (gallery.empty()) throw Error("factorize: gallery is empty");
  const Index n = static_cast<Index>(gallery.size());
  const Index d = gallery.front().dim();

  GramFactorization fact;
  fact.n_atoms = n;
  fact.log_atoms.reserve(static_cast<std::size_t>(n));
  for (const SpdMatrix& atom : gallery) {
    if (atom.dim() != d)
      throw DimensionMismatch("factorize: gallery atoms have mixed dimensions");
    fact.log_atoms.push_back(matrix_log(atom.m()));
  }

  fact.gram.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    fact.gram(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = (fact.log_atoms[i] - fact.log_atoms[j]).squaredNorm();
      const double k = std::exp(-params.gamma * d2);
      fact.gram(i, j) = k;
      fact.gram(j, i) = k;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fact.gram);
  if (es.info() != Eigen::Success)
    throw Error("factorize: Gram eigendecomposition failed");
  const Eigen::VectorXd& values = es.eigenvalues();  // ascending
  const double lambda_max = std::max(values(n - 1), 0.0);
  const double rank_tol =
      double(n) * std::numeric_limits<double>::epsilon() * lambda_max;

  Index rank = 0;
  for (Index i = 0; i < n; ++i)
    if (values(i) > rank_tol) ++rank;

  fact.eig_values.resize(rank);
  fact.eig_vectors.resize(n, rank);
  for (Index k = 0; k < rank; ++k) {
    const Index src = n - 1 - k;  // descending order
    fact.eig_values(k) = values(src);
    fact.eig_vectors.col(k) = es.eigenvectors().col(src);
  }
  fact.whitened_dict = fact.eig_values.cwiseSqrt().asDiagonal() *
                       fact.eig_vectors.transpose();
  return fact;
}

Eigen::VectorXd kernel_column(const Eigen::MatrixXd& query_log,
                              const GramFactorization& fact,
                              const KernelParams& params) {
  if (query_log.rows() != fact.atom_dim() || query_log.cols() != fact.atom_dim())
    throw DimensionMismatch("kernel_column: query dimension differs from gallery");
  Eigen::VectorXd k(fact.n_atoms);
  for (Index i = 0; i < fact.n_atoms; ++i)
    k(i) = std::exp(-params.gamma * (fact.log_atoms[i] - query_log).squaredNorm());
  return k;
}

Eigen::VectorXd embed_query_log(const Eigen::MatrixXd& query_log,
                                const GramFactorization& fact,
                                const KernelParams& params) {
  const Eigen::VectorXd k = kernel_column(query_log, fact, params);
  return fact.eig_values.cwiseSqrt().cwiseInverse().asDiagonal() *
         (fact.eig_vectors.transpose() * k);
}

Eigen::VectorXd embed_query(const SpdMatrix& x, const GramFactorization& fact,
                            const KernelParams& params) {
  return embed_query_log(matrix_log(x.m()), fact, params);
}

}  // namespace spdsrc
