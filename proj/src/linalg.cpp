#include "fracsolve/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fracsolve/error.hpp"

namespace fracsolve {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double default_gap_tol(const Matrix& A) { return 1e-8 * (1.0 + max_abs(A)); }

void require_square_finite(const Matrix& A, const char* what) {
  if (A.rows() == 0 || A.rows() != A.cols()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be square and non-empty");
  }
  if (!A.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
}

SpectralDecomposition eig_real_simple(const Matrix& A) { return eig_real_simple(A, default_gap_tol(A)); }

SpectralDecomposition eig_real_simple(const Matrix& A, double gap_tol) {
  require_square_finite(A, "A");
  if (!(gap_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "gap_tol must be positive");
  const auto n = A.rows();

  Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "eigenvalue iteration did not converge");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  // Imaginary parts at the level of a near-collision are rounding noise; the
  // gap test below reports those as clustered rather than complex.
  const double imag_tol = 1e-8 * (1.0 + max_abs(A));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values[i].imag()) > imag_tol) {
      throw Error(ErrorCode::ComplexSpectrum, "eigenvalue " + std::to_string(values[i].real()) + " + " +
                                                  std::to_string(values[i].imag()) + "i is not real");
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return values[a].real() < values[b].real(); });

  SpectralDecomposition out;
  out.lambdas.resize(n);
  out.T.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.lambdas[j] = values[src].real();
    out.T.col(j) = vectors.col(src).real();
    const double norm = out.T.col(j).norm();
    if (norm > 0.0) out.T.col(j) /= norm;
  }
  for (Eigen::Index j = 1; j < n; ++j) {
    const double gap = out.lambdas[j] - out.lambdas[j - 1];
    if (gap <= gap_tol) {
      throw Error(ErrorCode::ClusteredSpectrum, "eigenvalues " + std::to_string(out.lambdas[j - 1]) + " and " +
                                                    std::to_string(out.lambdas[j]) + " are closer than gap_tol");
    }
  }

  Eigen::FullPivLU<Matrix> lu(out.T);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw Error(ErrorCode::SingularEigenvectors, "eigenvector matrix is numerically singular");
  }
  out.T_inv = lu.inverse();
  out.recon_error = max_abs(out.T * out.lambdas.asDiagonal() * out.T_inv - A);
  if (out.recon_error > 1e-8 * (1.0 + max_abs(A)) || max_abs(out.T * out.T_inv - Matrix::Identity(n, n)) > 1e-8) {
    throw Error(ErrorCode::SingularEigenvectors,
                "eigendecomposition does not reconstruct A (error " + std::to_string(out.recon_error) + ")");
  }
  return out;
}

Matrix inverse(const Matrix& A) {
  require_square_finite(A, "A");
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw Error(ErrorCode::Singular, "matrix is rank deficient");
  return lu.inverse();
}

namespace {

// Numerator U (odd part) and V (even part) of the diagonal Pade approximant,
// exp(A) ~ (V - U)^{-1} (V + U).
struct PadeParts {
  Matrix U;
  Matrix V;
};

// b holds the degree-m coefficients b_0..b_m, m odd.
template <std::size_t N>
PadeParts pade_low(const Matrix& A, const std::array<double, N>& b) {
  static_assert(N % 2 == 0);
  const auto n = A.rows();
  const Matrix A2 = A * A;
  Matrix power = Matrix::Identity(n, n);
  Matrix odd = Matrix::Zero(n, n);
  Matrix even = Matrix::Zero(n, n);
  for (std::size_t j = 0; 2 * j + 1 < N; ++j) {
    even += b[2 * j] * power;
    odd += b[2 * j + 1] * power;
    power = power * A2;
  }
  return {A * odd, even};
}

PadeParts pade13(const Matrix& A) {
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
      10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
      960960.0,            16380.0,             182.0,              1.0};
  const auto n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  const Matrix U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return {U, V};
}

Matrix pade_solve(const PadeParts& parts) {
  return (parts.V - parts.U).partialPivLu().solve(parts.V + parts.U);
}

}  // namespace

Matrix expm(const Matrix& A) {
  require_square_finite(A, "A");
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();

  constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
  constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                         2162160.0,     110880.0,     3960.0,       90.0,        1.0};

  Matrix result;
  if (norm1 <= 1.495585217958292e-2) {
    result = pade_solve(pade_low(A, b3));
  } else if (norm1 <= 2.539398330063230e-1) {
    result = pade_solve(pade_low(A, b5));
  } else if (norm1 <= 9.504178996162932e-1) {
    result = pade_solve(pade_low(A, b7));
  } else if (norm1 <= 2.097847961257068e0) {
    result = pade_solve(pade_low(A, b9));
  } else {
    const double theta13 = 5.371920351148152e0;
    const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
    const Matrix scaled = A / std::ldexp(1.0, squarings);
    result = pade_solve(pade13(scaled));
    for (int i = 0; i < squarings; ++i) {
      result = result * result;
      if (!result.allFinite()) break;
    }
  }
  if (!result.allFinite()) throw Error(ErrorCode::Overflow, "matrix exponential overflows double range");
  return result;
}

double rpow(double x, std::int64_t num, std::int64_t den) {
  if (den <= 0 || den % 2 == 0) throw Error(ErrorCode::InvalidArgument, "power denominator must be odd and positive");
  if (x == 0.0) {
    if (num < 0) throw Error(ErrorCode::ZeroEigenvalue, "negative power of zero");
    return num == 0 ? 1.0 : 0.0;
  }
  const double magnitude = std::pow(std::abs(x), static_cast<double>(num) / static_cast<double>(den));
  return (x < 0.0 && num % 2 != 0) ? -magnitude : magnitude;
}

Matrix frac_power(const SpectralDecomposition& eig, std::int64_t num, std::int64_t den) {
  if (num < 0) {
    const double scale = std::max(1.0, eig.lambdas.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < eig.lambdas.size(); ++i) {
      if (std::abs(eig.lambdas[i]) <= 1e-13 * scale) {
        throw Error(ErrorCode::ZeroEigenvalue,
                    "negative power of a matrix with eigenvalue " + std::to_string(eig.lambdas[i]));
      }
    }
  }
  Vector powered(eig.lambdas.size());
  for (Eigen::Index i = 0; i < eig.lambdas.size(); ++i) powered[i] = rpow(eig.lambdas[i], num, den);
  return eig.T * powered.asDiagonal() * eig.T_inv;
}

Matrix frac_power(const Matrix& A, std::int64_t num, std::int64_t den, double gap_tol) {
  return frac_power(eig_real_simple(A, gap_tol), num, den);
}

Matrix perturb_to_simple(const Matrix& A, const Matrix& B, double eps) {
  require_square_finite(A, "A");
  if (B.rows() != A.rows() || B.cols() != A.cols()) {
    throw Error(ErrorCode::InvalidArgument, "perturbation direction must match the dimension of A");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  return A + eps * B;
}

}  // namespace fracsolve
