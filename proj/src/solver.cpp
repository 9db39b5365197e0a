#include "spdsrc/solver.hpp"

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace spdsrc {

namespace {

void require_valid(const SolverConfig& config) {
  if (!(config.lambda > 0.0)) throw Error("SolverConfig: lambda must be positive");
  if (!(config.mu > 0.0)) throw Error("SolverConfig: mu must be positive");
  if (!(config.eps > 0.0)) throw Error("SolverConfig: eps must be positive");
  if (config.max_iter < 1) throw Error("SolverConfig: max_iter must be at least 1");
}

void require_valid_weights(const Eigen::Ref<const VectorXd>& weights, Index n) {
  if (weights.size() != n)
    throw DimensionMismatch("weights length differs from dictionary size");
  for (Index i = 0; i < n; ++i)
    if (!(weights(i) >= 0.0) || !std::isfinite(weights(i)))
      throw ValidationError("weights must be finite and nonnegative");
}

}  // namespace

SystemFactor::SystemFactor(const MatrixXd& system) : llt_(system) {
  if (llt_.info() != Eigen::Success)
    throw NotPositiveDefinite("SystemFactor: system matrix is numerically singular");
}

VectorXd SystemFactor::solve(const Eigen::Ref<const VectorXd>& rhs) const {
  return llt_.solve(rhs);
}

MatrixXd SystemFactor::lower() const { return MatrixXd(llt_.matrixL()); }

SystemFactor prefactor(const Eigen::Ref<const MatrixXd>& dict,
                       const Eigen::Ref<const VectorXd>& weights,
                       const SolverConfig& config) {
  require_valid(config);
  const Index n = dict.cols();
  require_valid_weights(weights, n);
  MatrixXd system = config.lambda * (dict.transpose() * dict);
  system.array() += config.mu;  // mu 1 1^T
  system.diagonal() += config.mu * weights.cwiseAbs2();
  return SystemFactor(system);
}

double sparse_objective(const Eigen::Ref<const VectorXd>& xbar,
                        const Eigen::Ref<const MatrixXd>& dict,
                        const Eigen::Ref<const VectorXd>& weights, double lambda,
                        const Eigen::Ref<const VectorXd>& c) {
  return (weights.array() * c.array()).abs().sum() +
         0.5 * lambda * (xbar - dict * c).squaredNorm();
}

namespace detail {

void admm_sweep(const SystemFactor& factor, const VectorXd& rhs_base,
                const VectorXd& weights, double mu, AdmmState& state) {
  const Index n = weights.size();
  const VectorXd rhs =
      rhs_base + mu * weights.cwiseProduct(state.aux) +
      VectorXd::Constant(n, mu - state.affine_multiplier) +
      weights.cwiseProduct(state.coupling_multiplier);
  state.code = factor.solve(rhs);
  const VectorXd coupled = weights.cwiseProduct(state.code);
  state.aux = shrink(coupled - state.coupling_multiplier / mu, 1.0 / mu);
  state.coupling_multiplier += mu * (state.aux - coupled);
  state.affine_multiplier += mu * (state.code.sum() - 1.0);
}

SparseCode solve_with_state(const Eigen::Ref<const VectorXd>& xbar,
                            const Eigen::Ref<const MatrixXd>& dict,
                            const Eigen::Ref<const VectorXd>& weights,
                            const SolverConfig& config, AdmmState* final_state) {
  require_valid(config);
  const Index n = dict.cols();
  if (n < 1) throw DimensionMismatch("solve: dictionary has no atoms");
  if (xbar.size() != dict.rows())
    throw DimensionMismatch("solve: xbar length differs from dictionary rows");
  require_valid_weights(weights, n);
  if (!xbar.allFinite()) throw NonFinite("solve: xbar contains non-finite values");

  const SystemFactor factor = prefactor(dict, weights, config);
  const VectorXd rhs_base = config.lambda * (dict.transpose() * xbar);

  AdmmState state;
  state.code = VectorXd::Constant(n, 1.0 / double(n));
  state.aux = weights.cwiseProduct(state.code);
  state.coupling_multiplier = VectorXd::Zero(n);
  state.affine_multiplier = 0.0;

  SparseCode result;
  VectorXd previous_code = state.code;
  for (int k = 1; k <= config.max_iter; ++k) {
    previous_code = state.code;
    admm_sweep(factor, rhs_base, weights, config.mu, state);
    if (!state.code.allFinite() || !state.aux.allFinite())
      throw NonFinite("solve: ADMM iterate diverged to non-finite values");
    result.iterations = k;
    const double code_delta = (state.code - previous_code).lpNorm<Eigen::Infinity>();
    const double affine_residual = std::abs(state.code.sum() - 1.0);
    if (code_delta <= config.eps && affine_residual <= config.eps) {
      result.converged = true;
      break;
    }
  }

  result.c = state.code;
  result.a = state.aux;
  result.affine_residual = std::abs(state.code.sum() - 1.0);
  result.coupling_residual =
      (state.aux - weights.cwiseProduct(state.code)).lpNorm<Eigen::Infinity>();
  result.objective = sparse_objective(xbar, dict, weights, config.lambda, state.code);
  if (final_state) *final_state = state;
  return result;
}

}  // namespace detail

SparseCode solve(const Eigen::Ref<const VectorXd>& xbar,
                 const Eigen::Ref<const MatrixXd>& dict,
                 const Eigen::Ref<const VectorXd>& weights,
                 const SolverConfig& config) {
  return detail::solve_with_state(xbar, dict, weights, config, nullptr);
}

}  // namespace spdsrc
