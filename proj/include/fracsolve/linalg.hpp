#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace fracsolve {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A = T * diag(lambdas) * T_inv with pairwise distinct real eigenvalues,
/// sorted ascending.
struct SpectralDecomposition {
  Matrix T;
  Vector lambdas;
  Matrix T_inv;
  double recon_error = 0.0;  // max-abs of T*diag(lambdas)*T_inv - A
};

double max_abs(const Matrix& m);

/// 1e-8 * (1 + max|A_ij|).
double default_gap_tol(const Matrix& A);

/// Throws InvalidArgument unless A is non-empty, square and finite.
void require_square_finite(const Matrix& A, const char* what = "matrix");

/// Eigendecomposition restricted to distinct real spectra.
/// Throws ComplexSpectrum, ClusteredSpectrum (min gap <= gap_tol) or
/// SingularEigenvectors.
SpectralDecomposition eig_real_simple(const Matrix& A, double gap_tol);
SpectralDecomposition eig_real_simple(const Matrix& A);

/// LU inverse with full pivoting; throws Singular on rank deficiency.
Matrix inverse(const Matrix& A);

/// Scaling and squaring with a diagonal Pade core of degree 3..13, chosen by
/// the 1-norm. Works for any finite A; throws Overflow when the result is not
/// representable.
Matrix expm(const Matrix& A);

/// Real power sign(x)^num * |x|^(num/den) for odd den > 0.
double rpow(double x, std::int64_t num, std::int64_t den);

/// A^(num/den) for odd den, through the distinct-real eigendecomposition.
/// Negative exponents require every |lambda| above a singularity threshold
/// (ZeroEigenvalue otherwise).
Matrix frac_power(const Matrix& A, std::int64_t num, std::int64_t den, double gap_tol);
Matrix frac_power(const SpectralDecomposition& eig, std::int64_t num, std::int64_t den);

/// A + eps * B. The caller checks the spectrum.
Matrix perturb_to_simple(const Matrix& A, const Matrix& B, double eps);

}  // namespace fracsolve
