#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "spdsrc/errors.hpp"

namespace spdsrc {

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Relative symmetry gate: max |X(i,j) - X(j,i)| <= tol * max(1, max|X(i,j)|).
inline constexpr double kSymmetryTol = 1e-10;

// Eigenvalues at or below pd_floor(X) disqualify X as positive definite.
// The floor is scale-relative (mean eigenvalue), so well-scaled matrices
// with tiny determinants are still accepted.
template <typename Derived>
typename Derived::Scalar pd_floor(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return Scalar(1e-12) * (x.trace() / Scalar(x.rows()));
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != x.cols()) return false;
  if (x.rows() == 0) return false;
  using Scalar = typename Derived::Scalar;
  const Scalar scale = std::max(Scalar(1), x.cwiseAbs().maxCoeff());
  return (x.derived() - x.derived().transpose()).cwiseAbs().maxCoeff() <=
         Scalar(kSymmetryTol) * scale;
}

namespace detail {

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& x, const char* who) {
  if (!is_symmetric(x))
    throw NotSymmetric(std::string(who) + ": matrix is not symmetric");
}

template <typename Derived>
void require_same_dim(const Eigen::MatrixBase<Derived>& x, Index rows, Index cols,
                      const char* who) {
  if (x.rows() != rows || x.cols() != cols)
    throw DimensionMismatch(std::string(who) + ": operand dimensions differ");
}

// Symmetric eigendecomposition, the single primitive behind log, exp and
// inverse square root.
template <typename Scalar>
std::pair<Vector<Scalar>, Matrix<Scalar>> sym_eig(const Matrix<Scalar>& x) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(x);
  if (es.info() != Eigen::Success)
    throw Error("sym_eig: eigendecomposition failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Scalar>
Matrix<Scalar> symmetrize(const Matrix<Scalar>& x) {
  return ((x + x.transpose()) / Scalar(2)).eval();
}

}  // namespace detail

/// Principal matrix logarithm of a symmetric positive definite matrix,
/// computed as V diag(ln lambda_i) V^T.
/// Throws NotPositiveDefinite when any eigenvalue falls at or below pd_floor.
template <typename Derived>
Matrix<typename Derived::Scalar> matrix_log(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(x, "matrix_log");
  const Matrix<Scalar> xm = x.derived();
  auto [values, vectors] = detail::sym_eig<Scalar>(xm);
  const Scalar floor = pd_floor(xm);
  if (values.minCoeff() <= floor)
    throw NotPositiveDefinite("matrix_log: input is not positive definite");
  const Vector<Scalar> logs = values.array().log();
  return detail::symmetrize<Scalar>(vectors * logs.asDiagonal() * vectors.transpose());
}

/// Matrix exponential of a symmetric matrix; the result is SPD.
template <typename Derived>
Matrix<typename Derived::Scalar> matrix_exp(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(s, "matrix_exp");
  const Matrix<Scalar> sm = s.derived();
  auto [values, vectors] = detail::sym_eig<Scalar>(sm);
  const Vector<Scalar> exps = values.array().exp();
  return detail::symmetrize<Scalar>(vectors * exps.asDiagonal() * vectors.transpose());
}

/// Log-Euclidean distance ||log X - log Y||_F.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar dist_log_euclidean(const Eigen::MatrixBase<DerivedX>& x,
                                             const Eigen::MatrixBase<DerivedY>& y) {
  detail::require_same_dim(y, x.rows(), x.cols(), "dist_log_euclidean");
  return (matrix_log(x) - matrix_log(y)).norm();
}

/// Affine-invariant (geodesic) distance ||log(X^{-1/2} Y X^{-1/2})||_F.
/// X^{-1/2} comes from the eigendecomposition of X rather than an explicit
/// inverse followed by a square root.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar dist_airm(const Eigen::MatrixBase<DerivedX>& x,
                                    const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  detail::require_same_dim(y, x.rows(), x.cols(), "dist_airm");
  detail::require_symmetric(x, "dist_airm");
  detail::require_symmetric(y, "dist_airm");
  const Matrix<Scalar> xm = x.derived();
  auto [values, vectors] = detail::sym_eig<Scalar>(xm);
  if (values.minCoeff() <= pd_floor(xm))
    throw NotPositiveDefinite("dist_airm: first argument is not positive definite");
  const Vector<Scalar> inv_sqrt = values.array().rsqrt();
  const Matrix<Scalar> x_inv_sqrt =
      vectors * inv_sqrt.asDiagonal() * vectors.transpose();
  const Matrix<Scalar> whitened =
      detail::symmetrize<Scalar>(x_inv_sqrt * y.derived() * x_inv_sqrt);
  auto [wvalues, wvectors] = detail::sym_eig<Scalar>(whitened);
  if (wvalues.minCoeff() <= Scalar(0))
    throw NotPositiveDefinite("dist_airm: second argument is not positive definite");
  return std::sqrt(wvalues.array().log().square().sum());
}

namespace detail {

// ln det of an SPD matrix via Cholesky; falls back to eigenvalues when the
// factorization cannot complete.
template <typename Scalar>
Scalar log_det_spd(const Matrix<Scalar>& x, const char* who) {
  Eigen::LLT<Matrix<Scalar>> llt(x);
  if (llt.info() == Eigen::Success)
    return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
  auto [values, vectors] = sym_eig<Scalar>(x);
  if (values.minCoeff() <= Scalar(0))
    throw NotPositiveDefinite(std::string(who) + ": matrix is not positive definite");
  return values.array().log().sum();
}

}  // namespace detail

/// Symmetric Stein (Jensen-Bregman LogDet) divergence
///   J(X, Y) = ln det((X+Y)/2) - 1/2 ln det(XY).
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar stein_divergence(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  detail::require_same_dim(y, x.rows(), x.cols(), "stein_divergence");
  const Matrix<Scalar> mid = ((x.derived() + y.derived()) / Scalar(2)).eval();
  const Scalar mid_logdet = detail::log_det_spd<Scalar>(mid, "stein_divergence");
  const Scalar x_logdet =
      detail::log_det_spd<Scalar>(Matrix<Scalar>(x.derived()), "stein_divergence");
  const Scalar y_logdet =
      detail::log_det_spd<Scalar>(Matrix<Scalar>(y.derived()), "stein_divergence");
  return mid_logdet - (x_logdet + y_logdet) / Scalar(2);
}

/// Metric form of the Stein divergence, sqrt(J).
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar stein_distance(const Eigen::MatrixBase<DerivedX>& x,
                                         const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  return std::sqrt(std::max(stein_divergence(x, y), Scalar(0)));
}

/// A validated d x d symmetric positive definite matrix. Construction checks
/// symmetry (relative tolerance 1e-10) and positive definiteness (smallest
/// eigenvalue above pd_floor). Immutable afterwards.
template <typename Scalar>
class SpdMatrixT {
 public:
  explicit SpdMatrixT(Matrix<Scalar> entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
      throw DimensionMismatch("SpdMatrix: entries must be square and nonempty");
    detail::require_symmetric(entries_, "SpdMatrix");
    auto [values, vectors] = detail::sym_eig<Scalar>(entries_);
    if (values.minCoeff() <= pd_floor(entries_))
      throw NotPositiveDefinite("SpdMatrix: smallest eigenvalue below pd_floor");
  }

  static SpdMatrixT identity(Index d) {
    return SpdMatrixT(Matrix<Scalar>::Identity(d, d));
  }

  Index dim() const { return entries_.rows(); }
  const Matrix<Scalar>& m() const { return entries_; }

 private:
  Matrix<Scalar> entries_;
};

using SpdMatrix = SpdMatrixT<double>;

// Symmetric matrices (tangent-space elements, matrix logarithms) are plain
// dense matrices; symmetry is checked where it matters.
using SymMatrix = Matrix<double>;

inline double dist_log_euclidean(const SpdMatrix& x, const SpdMatrix& y) {
  return dist_log_euclidean(x.m(), y.m());
}
inline double dist_airm(const SpdMatrix& x, const SpdMatrix& y) {
  return dist_airm(x.m(), y.m());
}
inline double stein_divergence(const SpdMatrix& x, const SpdMatrix& y) {
  return stein_divergence(x.m(), y.m());
}
inline double stein_distance(const SpdMatrix& x, const SpdMatrix& y) {
  return stein_distance(x.m(), y.m());
}

}  // namespace spdsrc
