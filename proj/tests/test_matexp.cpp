#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "swarmnes/errors.hpp"
#include "swarmnes/matexp.hpp"
#include "swarmnes/rng.hpp"

using namespace swarmnes;

namespace {

// Oracle for symmetric input: exp(Q L Q^T) = Q exp(L) Q^T.
Eigen::MatrixXd expm_eigendecomposition(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  return solver.eigenvectors() *
         solver.eigenvalues().array().exp().matrix().asDiagonal() *
         solver.eigenvectors().transpose();
}

Eigen::MatrixXd random_symmetric(int n, double max_norm, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a(r, c) = rng.uniform(-1.0, 1.0);
    }
  }
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const double scale = rng.uniform(0.05, 1.0) * max_norm / sym.norm();
  return scale * sym;
}

}  // namespace

TEST_CASE("expm: zero matrix maps to identity") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  CHECK(expm(zero) == Eigen::MatrixXd::Identity(4, 4));
}

TEST_CASE("expm: diagonal case is elementwise") {
  Eigen::Matrix2d m = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  const Eigen::Matrix2d e = expm(m);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(e(0, 1)) == 0.0);
  CHECK(std::abs(e(1, 0)) == 0.0);
}

TEST_CASE("expm: matches eigendecomposition oracle on random symmetric 5x5") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd m = random_symmetric(5, 2.0, rng);
    const Eigen::MatrixXd ours = expm(m);
    const Eigen::MatrixXd oracle = expm_eigendecomposition(m);
    const double rel_err = (ours - oracle).norm() / oracle.norm();
    CHECK(rel_err < 1e-9);
  }
}

TEST_CASE("expm: trace-free arguments preserve unit determinant") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform(0.0, 6.0));
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        m(r, c) = rng.uniform(-0.5, 0.5);
      }
    }
    m -= (m.trace() / n) * Eigen::MatrixXd::Identity(n, n);
    CHECK(std::abs(expm(m).determinant() - 1.0) < 1e-9);
  }
}

TEST_CASE("expm: rejects non-finite and non-square input") {
  Eigen::Matrix2d bad = Eigen::Matrix2d::Zero();
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm(bad), NumericError);

  const Eigen::MatrixXd rect = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(expm(rect), NumericError);
}
