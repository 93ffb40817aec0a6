#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "trilat/basis.hpp"

using test_support::random_vector;
using test_support::rel_err;
using trilat::cart_to_tri;
using trilat::Index;
using trilat::TriangularBasis;
using trilat::tri_to_cart;

TEST_CASE("zero maps to zero both ways") {
  const TriangularBasis<double> basis(5);
  CHECK(tri_to_cart(basis, Eigen::VectorXd::Zero(5)).isZero(0.0));
  CHECK(cart_to_tri(basis, Eigen::VectorXd::Zero(5)).isZero(0.0));
}

TEST_CASE("unit coefficient vectors map to basis columns") {
  const TriangularBasis<double> basis(3);
  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(3);
  e2[1] = 1.0;
  const Eigen::VectorXd y = tri_to_cart(basis, e2);
  CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(y[2] == 0.0);

  const Eigen::VectorXd x = cart_to_tri(basis, y);
  CHECK(rel_err(x, e2) < 1e-15);
}

TEST_CASE("ones vector matches the dense product") {
  const TriangularBasis<double> basis(5);
  const Eigen::MatrixXd dense = materialize_dense(basis);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
  CHECK(rel_err(tri_to_cart(basis, ones), dense * ones) < 1e-12);
}

TEST_CASE("transforms agree with dense multiply and dense back-substitution") {
  std::mt19937_64 eng(2024);
  for (const Index n : {Index(1), Index(2), Index(3), Index(4), Index(5), Index(6),
                        Index(7), Index(8), Index(64), Index(256)}) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd dense = materialize_dense(basis);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd x = random_vector(eng, n);
      CHECK(rel_err(tri_to_cart(basis, x), dense * x) < 1e-10);
      const Eigen::VectorXd y = random_vector(eng, n);
      const Eigen::VectorXd solved = dense.triangularView<Eigen::Upper>().solve(y);
      CHECK(rel_err(cart_to_tri(basis, y), solved) < 1e-10);
    }
  }
}

TEST_CASE("roundtrips are identities within 1e-8 relative") {
  std::mt19937_64 eng(7);
  for (const Index n : {Index(1), Index(16), Index(64), Index(512)}) {
    const TriangularBasis<double> basis(n);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd y = random_vector(eng, n);
      CHECK(rel_err(tri_to_cart(basis, cart_to_tri(basis, y)), y) < 1e-8);
      const Eigen::VectorXd x = random_vector(eng, n);
      CHECK(rel_err(cart_to_tri(basis, tri_to_cart(basis, x)), x) < 1e-8);
    }
  }
}

TEST_CASE("tri_to_cart is linear") {
  std::mt19937_64 eng(99);
  const TriangularBasis<double> basis(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd x1 = random_vector(eng, 32);
    const Eigen::VectorXd x2 = random_vector(eng, 32);
    const double a = random_vector(eng, 1, -3.0, 3.0)[0];
    const double b = random_vector(eng, 1, -3.0, 3.0)[0];
    const Eigen::VectorXd lhs = tri_to_cart(basis, (a * x1 + b * x2).eval());
    const Eigen::VectorXd rhs =
        a * tri_to_cart(basis, x1) + b * tri_to_cart(basis, x2);
    CHECK(rel_err(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("basis columns have unit norm through the transform") {
  const Index n = 64;
  const TriangularBasis<double> basis(n);
  for (Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    CHECK(std::abs(tri_to_cart(basis, e).norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const TriangularBasis<double> basis(4);
  CHECK_THROWS_AS(tri_to_cart(basis, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(cart_to_tri(basis, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("float instantiation roundtrips at its own precision") {
  const TriangularBasis<float> basis(16);
  std::mt19937_64 eng(5);
  Eigen::VectorXf y(16);
  std::uniform_real_distribution<float> dist(-100.0f, 100.0f);
  for (Index i = 0; i < 16; ++i) {
    y[i] = dist(eng);
  }
  const Eigen::VectorXf back = tri_to_cart(basis, cart_to_tri(basis, y));
  CHECK((back - y).norm() / y.norm() < 1e-4f);
}
