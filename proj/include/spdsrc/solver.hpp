#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "spdsrc/errors.hpp"

namespace spdsrc {

/// Parameters of the weighted-l1 affine-constrained sparse coding problem
///   min ||diag(w) c||_1 + (lambda/2) ||xbar - Dbar c||_2^2   s.t. c^T 1 = 1
/// and of the ADMM loop that solves it. mu is the (fixed) penalty, eps the
/// stopping tolerance on both the code increment and the affine residual.
struct SolverConfig {
  double lambda = 1.0;
  double mu = 1.0;
  double eps = 1e-6;
  int max_iter = 500;
};

/// Soft threshold S_eta(v) = sgn(v) max(|v| - eta, 0).
inline double shrink(double v, double eta) {
  const double mag = std::abs(v) - eta;
  if (mag <= 0.0) return 0.0;
  return v > 0.0 ? mag : -mag;
}

inline Eigen::VectorXd shrink(const Eigen::VectorXd& v, double eta) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = shrink(v(i), eta);
  return out;
}

/// Result of one sparse coding solve. `a` is the auxiliary variable coupled
/// to diag(w) c; at convergence the coupling residual ||a - diag(w) c||_inf
/// is reported for diagnostics only, the stopping rule does not use it.
struct SparseCode {
  Eigen::VectorXd c;
  Eigen::VectorXd a;
  int iterations = 0;
  bool converged = false;
  double affine_residual = 0.0;
  double coupling_residual = 0.0;
  double objective = 0.0;
};

/// Reusable Cholesky factorization of the ADMM system matrix
///   M = lambda Dbar^T Dbar + mu diag(w)^2 + mu 1 1^T,
/// enabling O(N^2) solves per sweep.
class SystemFactor {
 public:
  explicit SystemFactor(const Eigen::MatrixXd& system);

  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& rhs) const;
  Eigen::MatrixXd lower() const;
  Eigen::Index size() const { return llt_.matrixLLT().rows(); }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

SystemFactor prefactor(const Eigen::Ref<const Eigen::MatrixXd>& dict,
                       const Eigen::Ref<const Eigen::VectorXd>& weights,
                       const SolverConfig& config);

/// Objective value at a given code, straight from the definition.
double sparse_objective(const Eigen::Ref<const Eigen::VectorXd>& xbar,
                        const Eigen::Ref<const Eigen::MatrixXd>& dict,
                        const Eigen::Ref<const Eigen::VectorXd>& weights,
                        double lambda, const Eigen::Ref<const Eigen::VectorXd>& c);

/// ADMM solve of the weighted-l1 affine-constrained problem. Runs the exact
/// update sequence
///   c <- M^{-1} (lambda Dbar^T xbar + mu W a + (mu - delta) 1 + W Delta)
///   a <- S_{1/mu}(W c - Delta / mu)
///   Delta <- Delta + mu (a - W c),  delta <- delta + mu (c^T 1 - 1)
/// from c0 = 1/N, a0 = W c0 and zero multipliers, stopping when both
/// ||c_k - c_{k-1}||_inf <= eps and |c^T 1 - 1| <= eps. Hitting max_iter is
/// not an error: the code is returned with converged = false. Throws
/// NonFinite if an iterate leaves the finite range.
SparseCode solve(const Eigen::Ref<const Eigen::VectorXd>& xbar,
                 const Eigen::Ref<const Eigen::MatrixXd>& dict,
                 const Eigen::Ref<const Eigen::VectorXd>& weights,
                 const SolverConfig& config);

namespace detail {

struct AdmmState {
  Eigen::VectorXd code;                 // c
  Eigen::VectorXd aux;                  // a
  Eigen::VectorXd coupling_multiplier;  // multiplier on a = W c
  double affine_multiplier = 0.0;       // multiplier on c^T 1 = 1
};

void admm_sweep(const SystemFactor& factor, const Eigen::VectorXd& rhs_base,
                const Eigen::VectorXd& weights, double mu, AdmmState& state);

SparseCode solve_with_state(const Eigen::Ref<const Eigen::VectorXd>& xbar,
                            const Eigen::Ref<const Eigen::MatrixXd>& dict,
                            const Eigen::Ref<const Eigen::VectorXd>& weights,
                            const SolverConfig& config, AdmmState* final_state);

}  // namespace detail

}  // namespace spdsrc
