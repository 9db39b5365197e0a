#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spdsrc/kernel.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace spdsrc;

namespace {

std::vector<SpdMatrix> random_gallery(Eigen::Index n, Eigen::Index d,
                                      std::mt19937_64& rng) {
  std::vector<SpdMatrix> gallery;
  gallery.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    gallery.emplace_back(testutil::random_spd(d, rng));
  return gallery;
}

}  // namespace

TEST_CASE("KernelParams rejects nonpositive gamma") {
  CHECK_THROWS_AS(KernelParams(0.0), Error);
  CHECK_THROWS_AS(KernelParams(-1.0), Error);
  CHECK_NOTHROW(KernelParams(0.05));
}

TEST_CASE("kernel_eval: trivial values") {
  std::mt19937_64 rng(3);
  const MatrixXd x = testutil::random_spd(4, rng);
  CHECK(kernel_eval(x, x, KernelParams(0.7)) == 1.0);

  MatrixXd y = MatrixXd::Zero(2, 2);
  y(0, 0) = std::exp(2.0);
  y(1, 1) = 1.0;
  CHECK(kernel_eval(MatrixXd::Identity(2, 2), y, KernelParams(0.05)) ==
        doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
}

TEST_CASE("kernel_eval composes exp(-gamma dist^2)") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const MatrixXd a = testutil::random_spd(5, rng);
    const MatrixXd b = testutil::random_spd(5, rng);
    const double d = dist_log_euclidean(a, b);
    CHECK(kernel_eval(a, b, KernelParams(0.5)) ==
          doctest::Approx(std::exp(-0.5 * d * d)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(
      kernel_eval(MatrixXd::Identity(2, 2), MatrixXd::Identity(3, 3), KernelParams(1.0)),
      DimensionMismatch);
}

TEST_CASE("factorize: single atom") {
  std::mt19937_64 rng(7);
  std::vector<SpdMatrix> gallery = random_gallery(1, 3, rng);
  const GramFactorization fact = factorize(gallery, KernelParams(0.5));
  CHECK(fact.n_atoms == 1);
  CHECK(fact.gram(0, 0) == 1.0);
  CHECK(fact.rank() == 1);
  CHECK(fact.eig_values(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fact.whitened_dict(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("factorize: duplicated atom drops the rank") {
  std::mt19937_64 rng(11);
  std::vector<SpdMatrix> gallery = random_gallery(2, 4, rng);
  gallery.push_back(gallery.front());  // exact duplicate
  const GramFactorization fact = factorize(gallery, KernelParams(0.5));
  CHECK(fact.n_atoms == 3);
  CHECK(fact.rank() == 2);

  // the whitened dictionary reproduces the rank-r truncation of K
  const MatrixXd truncated = fact.eig_vectors * fact.eig_values.asDiagonal() *
                             fact.eig_vectors.transpose();
  CHECK((fact.whitened_dict.transpose() * fact.whitened_dict - truncated).norm() <=
        1e-8 * fact.gram.norm());
}

TEST_CASE("factorize: whitened dictionary reconstructs the Gram matrix") {
  std::mt19937_64 rng(13);
  std::vector<SpdMatrix> gallery = random_gallery(10, 4, rng);
  const GramFactorization fact = factorize(gallery, KernelParams(0.5));
  CHECK(fact.rank() == 10);
  const MatrixXd reconstructed = fact.whitened_dict.transpose() * fact.whitened_dict;
  CHECK((reconstructed - fact.gram).norm() <= 1e-8 * fact.gram.norm());
  CHECK((fact.gram.diagonal().array() == 1.0).all());
}

TEST_CASE("factorize rejects mixed dimensions and empty galleries") {
  std::mt19937_64 rng(17);
  std::vector<SpdMatrix> gallery = random_gallery(2, 3, rng);
  gallery.emplace_back(testutil::random_spd(4, rng));
  CHECK_THROWS_AS(factorize(gallery, KernelParams(1.0)), DimensionMismatch);
  CHECK_THROWS_AS(factorize(std::vector<SpdMatrix>{}, KernelParams(1.0)), Error);
}

TEST_CASE("Gram matrix is positive definite across gallery sizes and scales") {
  std::mt19937_64 rng(19);
  for (double gamma : {0.01, 0.05, 0.5, 5.0}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng() % 46);
      std::vector<SpdMatrix> gallery = random_gallery(n, 3, rng);
      const GramFactorization fact = factorize(gallery, KernelParams(gamma));
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(fact.gram);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
    }
  }
}

TEST_CASE("embed_query: gallery atom maps to its whitened column") {
  std::mt19937_64 rng(23);
  std::vector<SpdMatrix> gallery = random_gallery(8, 4, rng);
  const KernelParams params(0.5);
  const GramFactorization fact = factorize(gallery, params);
  REQUIRE(fact.rank() == 8);
  for (Eigen::Index j : {0, 3, 7}) {
    const VectorXd xbar = embed_query(gallery[static_cast<std::size_t>(j)], fact, params);
    CHECK((xbar - fact.whitened_dict.col(j)).norm() <= 1e-8);
  }
}

TEST_CASE("embed_query: single-atom gallery embeds the atom onto itself") {
  std::mt19937_64 rng(29);
  std::vector<SpdMatrix> gallery = random_gallery(1, 3, rng);
  const KernelParams params(1.0);
  const GramFactorization fact = factorize(gallery, params);
  const VectorXd xbar = embed_query(gallery[0], fact, params);
  CHECK(xbar.size() == 1);
  CHECK(xbar(0) == doctest::Approx(fact.whitened_dict(0, 0)).epsilon(1e-12));
}

TEST_CASE("whitened objective differs from the RKHS objective by a constant") {
  std::mt19937_64 rng(31);
  const KernelParams params(0.5);
  std::vector<SpdMatrix> gallery = random_gallery(8, 4, rng);
  const GramFactorization fact = factorize(gallery, params);
  REQUIRE(fact.rank() == 8);

  const SpdMatrix query(testutil::random_spd(4, rng));
  const MatrixXd query_log = matrix_log(query.m());
  const VectorXd k = kernel_column(query_log, fact, params);
  const VectorXd xbar = embed_query(query, fact, params);

  // at full rank the embedding satisfies Dbar^T xbar = k
  CHECK((fact.whitened_dict.transpose() * xbar - k).lpNorm<Eigen::Infinity>() <= 1e-8);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 100; ++rep) {
    const VectorXd c = testutil::random_affine_feasible(8, rng);
    const double rkhs = c.dot(fact.gram * c) - 2.0 * c.dot(k) + 1.0;
    const double whitened = (xbar - fact.whitened_dict * c).squaredNorm();
    const double diff = rkhs - whitened;
    lo = std::min(lo, diff);
    hi = std::max(hi, diff);
  }
  CHECK(hi - lo <= 1e-8);

  // the constant is k^T K^{-1} k - kappa(X, X)
  const double expected = k.dot(fact.gram.ldlt().solve(k)) - 1.0;
  CHECK(std::abs((lo + hi) / 2.0 + expected) <= 1e-8);
}

TEST_CASE("embed_query rejects mismatched query dimension") {
  std::mt19937_64 rng(37);
  std::vector<SpdMatrix> gallery = random_gallery(3, 3, rng);
  const KernelParams params(0.5);
  const GramFactorization fact = factorize(gallery, params);
  const SpdMatrix wrong(testutil::random_spd(4, rng));
  CHECK_THROWS_AS(embed_query(wrong, fact, params), DimensionMismatch);
}
