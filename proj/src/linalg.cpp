#include "polymat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polymat {

namespace {

void require_even_order(int two_t) {
  if (two_t < 2 || two_t % 2 != 0)
    throw ValidationError("Schatten order must be an even integer >= 2, got " +
                          std::to_string(two_t));
}

Vector truncate_small(Vector sigma) {
  if (sigma.size() == 0) return sigma;
  double cutoff = kSingularValueCutoff * sigma.maxCoeff();
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] < cutoff) sigma[i] = 0.0;
  return sigma;
}

}  // namespace

bool is_finite(const Matrix& a) { return a.allFinite(); }

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite())
    throw ValidationError(std::string(what) + ": non-finite entries");
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

Vector gram_eigenvalues(const Matrix& a) {
  Matrix gram = a.cols() <= a.rows() ? Matrix(a.transpose() * a)
                                     : Matrix(a * a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseMax(0.0);
}

}  // namespace

Vector singular_values(const Matrix& a) {
  require_finite(a, "singular_values");
  Vector sigma;
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    sigma = eig.eigenvalues().cwiseAbs();
  } else if (std::min(a.rows(), a.cols()) <= 64) {
    Eigen::JacobiSVD<Matrix> svd(a);
    sigma = svd.singularValues();
  } else {
    sigma = gram_eigenvalues(a).cwiseSqrt();
  }
  std::sort(sigma.data(), sigma.data() + sigma.size(), std::greater<double>());
  return truncate_small(std::move(sigma));
}

double schatten_power(const Matrix& a, int two_t) {
  require_even_order(two_t);
  require_finite(a, "schatten_power");
  const int t = two_t / 2;
  // even powers come straight from Gram eigenvalues, with no square-root loss
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
      sum += std::pow(eig.eigenvalues()[i] * eig.eigenvalues()[i], t);
    return sum;
  }
  Vector lambda = gram_eigenvalues(a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    sum += std::pow(lambda[i], t);
  return sum;
}

double schatten_norm(const Matrix& a, int two_t) {
  double p = schatten_power(a, two_t);
  return p == 0.0 ? 0.0 : std::pow(p, 1.0 / two_t);
}

double schatten_power_trace_formula(const Matrix& a, int two_t) {
  require_even_order(two_t);
  require_finite(a, "schatten_power_trace_formula");
  const int t = two_t / 2;
  Matrix gram = a.transpose() * a;
  Matrix power = gram;
  for (int i = 1; i < t; ++i) power = power * gram;
  return power.trace();
}

double singular_power_sum(const Matrix& a, double p) {
  if (p < 1.0) throw ValidationError("singular_power_sum requires p >= 1");
  Vector sigma = singular_values(a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > 0.0) sum += std::pow(sigma[i], p);
  return sum;
}

double psd_sqrt_schatten_power(const Matrix& m, int two_t) {
  require_even_order(two_t);
  require_finite(m, "psd_sqrt_schatten_power");
  if (m.rows() != m.cols())
    throw ValidationError("psd_sqrt_schatten_power requires a square matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const int t = two_t / 2;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    double lambda = std::max(0.0, eig.eigenvalues()[i]);
    sum += std::pow(lambda, t);
  }
  return sum;
}

double schatten_power_from_gram(const Matrix& gram, int two_t) {
  return psd_sqrt_schatten_power(gram, two_t);
}

Matrix hermitian_dilation(const Matrix& a) {
  require_finite(a, "hermitian_dilation");
  const Eigen::Index r = a.rows(), c = a.cols();
  Matrix h = Matrix::Zero(r + c, r + c);
  h.topRightCorner(r, c) = a;
  h.bottomLeftCorner(c, r) = a.transpose();
  return h;
}

Matrix matrix_abs(const Matrix& a) {
  require_finite(a, "matrix_abs");
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    return eig.eigenvectors() *
           eig.eigenvalues().cwiseAbs().asDiagonal() *
           eig.eigenvectors().transpose();
  }
  Matrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace polymat
