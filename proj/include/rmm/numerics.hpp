#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rmm/matrix.hpp"

/// Dense kernels: symmetric eigendecomposition, thin SVD, ridge regression.
namespace rmm::numerics {

struct EigenResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
  int sweeps = 0;
};

struct SvdResult {
  Matrix u;                   // n×k, orthonormal columns, k = min(n, m)
  std::vector<double> sigma;  // descending, >= 0
  Matrix v;                   // m×k, orthonormal columns
  std::size_t rank = 0;       // count of sigma above the zero-class threshold
};

struct RidgeResult {
  enum class Method { Cholesky, Svd };
  Matrix coef;  // p×q
  Method method = Method::Cholesky;
  std::size_t rank = 0;
  bool minimal_norm = false;  // λ = 0 and X rank deficient
};

struct JacobiOptions {
  double rel_tol = 1e-12;  // off-diagonal Frobenius norm relative to ‖S‖_F
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver for a symmetric matrix.
///
/// Eigenvalues come back descending. Values in [-1e-10·λ_1, 0) are clamped to
/// zero. Throws DimensionError for non-square input, DataError when the input
/// is non-finite or not symmetric to 1e-12 relative, NumericalError when the
/// sweep budget runs out.
EigenResult sym_eig(const Matrix& s, const JacobiOptions& opts = {});

/// Thin SVD by one-sided (Hestenes) Jacobi rotations.
SvdResult thin_svd(const Matrix& a);

/// Lower Cholesky factor of a symmetric positive definite matrix, or nullopt
/// when a non-positive pivot shows up.
std::optional<Matrix> cholesky(const Matrix& s);

/// Solves L·Lᵀ·X = B in place given the lower Cholesky factor.
Matrix cholesky_solve(const Matrix& lower, const Matrix& b);

/// argmin_B ‖XB − Y‖² + λ‖B‖².
///
/// λ > 0 goes through Cholesky on XᵀX + λI with an SVD fallback. λ = 0 uses
/// the SVD pseudo-inverse, which returns the minimal-norm solution when X is
/// rank deficient (flagged in the result).
RidgeResult ridge_solve(const Matrix& x, const Matrix& y, double lambda);

/// Same solve from precomputed normal-equation blocks G = XᵀX and XᵀY.
/// Requires λ > 0; the fallback uses the eigendecomposition of G, which is
/// the right-singular system of X.
RidgeResult ridge_solve_gram(const Matrix& gram, const Matrix& xty, double lambda);

}  // namespace rmm::numerics
