#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polymat/linalg.hpp"
#include "polymat/suite.hpp"

using namespace polymat;

namespace {

// independent oracle: singular values straight from an SVD of the raw matrix
double svd_oracle_power(const Matrix& a, int two_t) {
  Eigen::JacobiSVD<Matrix> svd(a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    sum += std::pow(svd.singularValues()[i], two_t);
  return sum;
}

}  // namespace

TEST_CASE("schatten power on diagonal and identity matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  CHECK(schatten_power(d, 2) == doctest::Approx(25.0).epsilon(1e-12));

  Matrix id = Matrix::Identity(16, 16);
  CHECK(schatten_power(id, 4) == doctest::Approx(16.0));
  CHECK(schatten_norm(id, 4) == doctest::Approx(2.0));
  CHECK(schatten_power(id, 6) == doctest::Approx(16.0));
}

TEST_CASE("schatten norm of the all-ones matrix") {
  Matrix ones = Matrix::Ones(2, 2);
  CHECK(schatten_norm(ones, 4) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("schatten power matches an SVD oracle on a seeded 5x5") {
  Matrix a = suite::random_matrix(5, 5, 99, 1);
  double expected = svd_oracle_power(a, 6);
  CHECK(schatten_power(a, 6) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("trace formula equals singular value sums up to 200x200") {
  for (int i = 0; i < 6; ++i) {
    int rows = 20 + 36 * i;
    Matrix a = suite::random_matrix(rows, rows - 7, 1234, 10 + i);
    for (int two_t : {2, 4, 6}) {
      double lhs = schatten_power_trace_formula(a, two_t);
      double rhs = schatten_power(a, two_t);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("schatten norm is transpose invariant and nonincreasing in t") {
  Matrix a = suite::random_matrix(7, 4, 7, 0);
  for (int two_t : {2, 4, 6, 8}) {
    CHECK(schatten_norm(a, two_t) ==
          doctest::Approx(schatten_norm(a.transpose(), two_t)).epsilon(1e-12));
  }
  double prev = schatten_norm(a, 2);
  for (int two_t : {4, 6, 8, 10}) {
    double cur = schatten_norm(a, two_t);
    CHECK(cur <= prev * (1.0 + 1e-12));
    prev = cur;
  }
}

TEST_CASE("hermitian dilation structure and Schatten doubling") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  Matrix h = hermitian_dilation(a);
  REQUIRE(h.rows() == 4);
  CHECK(h.topLeftCorner(2, 2).isZero(0.0));
  CHECK(h.bottomRightCorner(2, 2).isZero(0.0));
  CHECK(h.topRightCorner(2, 2) == a);
  CHECK(h.bottomLeftCorner(2, 2) == a.transpose());

  CHECK(hermitian_dilation(Matrix::Zero(3, 2)).isZero(0.0));

  Matrix b = suite::random_matrix(6, 3, 21, 0);
  for (int t = 1; t <= 3; ++t)
    CHECK(schatten_power(hermitian_dilation(b), 2 * t) ==
          doctest::Approx(2.0 * schatten_power(b, 2 * t)).epsilon(1e-9));
}

TEST_CASE("matrix_abs") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -2.0;
  d(1, 1) = 5.0;
  Matrix ad = matrix_abs(d);
  CHECK(ad(0, 0) == doctest::Approx(2.0));
  CHECK(ad(1, 1) == doctest::Approx(5.0));

  // orthogonal input maps to the identity
  Matrix q = Eigen::HouseholderQR<Matrix>(suite::random_matrix(5, 5, 3, 0))
                 .householderQ();
  CHECK((matrix_abs(q) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);

  // eigenvalues of |A| are the singular values of A, and |A|^2 = A^T A
  Matrix a = suite::random_matrix(6, 6, 17, 0);
  Matrix abs_a = matrix_abs(a);
  CHECK(is_symmetric(abs_a, 1e-10));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(abs_a);
  Vector sigma = singular_values(a);
  Vector lambda = eig.eigenvalues().reverse();
  for (int i = 0; i < 6; ++i)
    CHECK(lambda[i] == doctest::Approx(sigma[i]).epsilon(1e-8));
  CHECK((abs_a * abs_a - a.transpose() * a).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("input validation") {
  Matrix bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(schatten_power(bad, 2), ValidationError);
  Matrix ok = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(schatten_power(ok, 3), ValidationError);
  CHECK_THROWS_AS(schatten_power(ok, 0), ValidationError);
}
