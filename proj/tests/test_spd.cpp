#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spdsrc/spd.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace spdsrc;

namespace {
MatrixXd diag2(double a, double b) {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
}  // namespace

TEST_CASE("matrix_log: trivial values") {
  CHECK(matrix_log(MatrixXd::Identity(2, 2)).norm() <= 1e-14);

  const MatrixXd x = diag2(std::exp(1.0), std::exp(2.0));
  const MatrixXd l = matrix_log(x);
  CHECK(l(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(l(0, 1)) <= 1e-13);
}

TEST_CASE("matrix_log: rejects non-PD and asymmetric input") {
  CHECK_THROWS_AS(matrix_log(diag2(1.0, -1.0)), NotPositiveDefinite);
  MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(matrix_log(asym), NotSymmetric);
}

TEST_CASE("matrix_exp: trivial values and Taylor oracle") {
  CHECK((matrix_exp(MatrixXd::Zero(3, 3)) - MatrixXd::Identity(3, 3)).norm() <= 1e-14);

  const MatrixXd e = matrix_exp(diag2(1.0, 2.0));
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    MatrixXd s = testutil::random_symmetric(4, rng);
    s *= 0.5 / std::max(s.norm(), 1e-12);
    CHECK((matrix_exp(s) - testutil::taylor_exp(s)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("matrix_exp and matrix_log are mutually inverse on SPD inputs") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const MatrixXd x = testutil::random_spd(5, rng);
    const MatrixXd back = matrix_exp(matrix_log(x));
    CHECK((back - x).cwiseAbs().maxCoeff() <=
          1e-10 * x.cwiseAbs().maxCoeff());
  }
  // ill-conditioned but within the contract (condition number <= 1e6)
  const MatrixXd hard = testutil::random_spd_with_cond(6, 1e6, rng);
  const MatrixXd back = matrix_exp(matrix_log(hard));
  CHECK((back - hard).cwiseAbs().maxCoeff() <= 1e-10 * hard.cwiseAbs().maxCoeff());
}

TEST_CASE("dist_log_euclidean: trivial values and symmetry") {
  std::mt19937_64 rng(13);
  const MatrixXd x = testutil::random_spd(4, rng);
  CHECK(dist_log_euclidean(x, x) == 0.0);

  CHECK(dist_log_euclidean(MatrixXd::Identity(2, 2), diag2(std::exp(2.0), 1.0)) ==
        doctest::Approx(2.0).epsilon(1e-12));

  for (int rep = 0; rep < 10; ++rep) {
    const MatrixXd a = testutil::random_spd(6, rng);
    const MatrixXd b = testutil::random_spd(6, rng);
    CHECK(std::abs(dist_log_euclidean(a, b) - dist_log_euclidean(b, a)) <= 1e-12);
  }
}

TEST_CASE("dist_log_euclidean: metric axioms on random triples") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 7);
    const MatrixXd a = testutil::random_spd(d, rng);
    const MatrixXd b = testutil::random_spd(d, rng);
    const MatrixXd c = testutil::random_spd(d, rng);
    const double ab = dist_log_euclidean(a, b);
    const double bc = dist_log_euclidean(b, c);
    const double ac = dist_log_euclidean(a, c);
    CHECK(ab >= 0.0);
    CHECK(ac <= ab + bc + 1e-10);
  }
}

TEST_CASE("dist_airm: trivial values") {
  std::mt19937_64 rng(19);
  const MatrixXd x = testutil::random_spd(4, rng);
  CHECK(dist_airm(x, x) <= 1e-12);

  MatrixXd four(1, 1), one(1, 1);
  four << 4.0;
  one << 1.0;
  CHECK(dist_airm(four, one) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("dist_airm: affine invariance under congruence transforms") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 25; ++rep) {
    const MatrixXd x = testutil::random_spd(4, rng);
    const MatrixXd y = testutil::random_spd(4, rng);
    const MatrixXd a = testutil::random_invertible(4, rng);
    const MatrixXd xt = ((a * x * a.transpose()) + (a * x * a.transpose()).transpose()) / 2.0;
    const MatrixXd yt = ((a * y * a.transpose()) + (a * y * a.transpose()).transpose()) / 2.0;
    CHECK(std::abs(dist_airm(xt, yt) - dist_airm(x, y)) <= 1e-8);
  }
}

TEST_CASE("dist_airm and dist_log_euclidean agree for commuting matrices") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    const MatrixXd q = testutil::random_orthogonal(5, rng);
    VectorXd ea(5), eb(5);
    for (int i = 0; i < 5; ++i) {
      ea(i) = unif(rng);
      eb(i) = unif(rng);
    }
    const MatrixXd x = ((q * ea.asDiagonal() * q.transpose()) +
                        (q * ea.asDiagonal() * q.transpose()).transpose()) / 2.0;
    const MatrixXd y = ((q * eb.asDiagonal() * q.transpose()) +
                        (q * eb.asDiagonal() * q.transpose()).transpose()) / 2.0;
    CHECK(std::abs(dist_log_euclidean(x, y) - dist_airm(x, y)) <= 1e-10);
  }
}

TEST_CASE("stein_divergence: trivial values, symmetry, nonnegativity") {
  std::mt19937_64 rng(31);
  const MatrixXd x = testutil::random_spd(3, rng);
  CHECK(std::abs(stein_divergence(x, x)) <= 1e-12);

  MatrixXd one(1, 1), three(1, 1);
  one << 1.0;
  three << 3.0;
  CHECK(stein_divergence(one, three) ==
        doctest::Approx(std::log(2.0) - 0.5 * std::log(3.0)).epsilon(1e-12));

  for (int rep = 0; rep < 20; ++rep) {
    const MatrixXd a = testutil::random_spd(5, rng);
    const MatrixXd b = testutil::random_spd(5, rng);
    const double j = stein_divergence(a, b);
    CHECK(j >= 0.0);
    CHECK(std::abs(j - stein_divergence(b, a)) <= 1e-12);
    // determinant-concavity oracle via an independent LU determinant
    const double lhs = std::log(MatrixXd((a + b) / 2.0).determinant());
    const double rhs = 0.5 * (std::log(a.determinant()) + std::log(b.determinant()));
    CHECK(j == doctest::Approx(lhs - rhs).epsilon(1e-9));
    CHECK(lhs >= rhs - 1e-12);
  }
}

TEST_CASE("stein_distance is sqrt of the divergence") {
  std::mt19937_64 rng(37);
  const MatrixXd a = testutil::random_spd(4, rng);
  const MatrixXd b = testutil::random_spd(4, rng);
  CHECK(stein_distance(a, b) ==
        doctest::Approx(std::sqrt(stein_divergence(a, b))).epsilon(1e-12));
}

TEST_CASE("orthogonal similarity leaves all three dissimilarities unchanged") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const MatrixXd x = testutil::random_spd(5, rng);
    const MatrixXd y = testutil::random_spd(5, rng);
    const MatrixXd q = testutil::random_orthogonal(5, rng);
    const auto conj = [&](const MatrixXd& m) {
      return MatrixXd(((q * m * q.transpose()) + (q * m * q.transpose()).transpose()) / 2.0);
    };
    const MatrixXd xt = conj(x), yt = conj(y);
    CHECK(std::abs(dist_log_euclidean(xt, yt) - dist_log_euclidean(x, y)) <= 1e-10);
    CHECK(std::abs(stein_divergence(xt, yt) - stein_divergence(x, y)) <= 1e-10);
    CHECK(std::abs(dist_airm(xt, yt) - dist_airm(x, y)) <= 1e-8);
  }
}

TEST_CASE("SpdMatrix validation") {
  CHECK_NOTHROW(SpdMatrix(MatrixXd::Identity(3, 3)));
  CHECK_NOTHROW(SpdMatrix(diag2(1e-8, 1e-8)));  // well-scaled tiny determinant

  MatrixXd asym(2, 2);
  asym << 1.0, 0.3, 0.0, 1.0;
  CHECK_THROWS_AS(SpdMatrix{asym}, NotSymmetric);
  CHECK_THROWS_AS(SpdMatrix(diag2(1.0, -0.5)), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(diag2(1.0, 1e-15)), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(MatrixXd::Zero(0, 0)), DimensionMismatch);

  const SpdMatrix id = SpdMatrix::identity(4);
  CHECK(id.dim() == 4);
  CHECK(id.m() == MatrixXd::Identity(4, 4));
}

TEST_CASE("dimension mismatches are rejected") {
  const MatrixXd a = MatrixXd::Identity(2, 2);
  const MatrixXd b = MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(dist_log_euclidean(a, b), DimensionMismatch);
  CHECK_THROWS_AS(dist_airm(a, b), DimensionMismatch);
  CHECK_THROWS_AS(stein_divergence(a, b), DimensionMismatch);
}
