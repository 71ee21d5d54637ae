#pragma once

#include <Eigen/Dense>

#include "polymat/common.hpp"

namespace polymat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative cutoff under which singular values are treated as zero, and the
// symmetry-detection threshold on max|A - A^T|.
inline constexpr double kSingularValueCutoff = 1e-12;
inline constexpr double kSymmetryTol = 1e-12;

bool is_finite(const Matrix& a);
void require_finite(const Matrix& a, const char* what);

bool is_symmetric(const Matrix& a, double tol = kSymmetryTol);

/// Singular values, descending, with values below 1e-12 * sigma_max zeroed.
/// Symmetric inputs go through a symmetric eigendecomposition.
Vector singular_values(const Matrix& a);

/// ||A||_{2t}^{2t} = tr((A^T A)^t) = sum_j sigma_j^{2t}, from singular values.
double schatten_power(const Matrix& a, int two_t);

/// ||A||_{2t} = schatten_power(A, 2t)^(1/2t).
double schatten_norm(const Matrix& a, int two_t);

/// Literal tr((A^T A)^t) by repeated multiplication. Cross-check path; the
/// production route is schatten_power.
double schatten_power_trace_formula(const Matrix& a, int two_t);

/// Sum of sigma_j^p for real p >= 1 (trace inequality needs fractional powers).
double singular_power_sum(const Matrix& a, double p);

/// ||M^{1/2}||_{2t}^{2t} = sum_j lambda_j^t for symmetric PSD M.
double psd_sqrt_schatten_power(const Matrix& m, int two_t);

/// Schatten 2t-power from the eigenvalues of a Gram matrix A^T A.
double schatten_power_from_gram(const Matrix& gram, int two_t);

/// [[0, A], [A^T, 0]]
Matrix hermitian_dilation(const Matrix& a);

/// (A^T A)^{1/2}: symmetric PSD, eigenvalues equal to the singular values of A.
Matrix matrix_abs(const Matrix& a);

}  // namespace polymat
