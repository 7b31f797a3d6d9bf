#pragma once

#include <span>
#include <vector>

#include "fracsolve/linalg.hpp"
#include "fracsolve/rational_order.hpp"

namespace fracsolve {

/// D^alpha x = A x for t > t0 with x(t0) = x0.
struct CauchyProblem {
  Matrix A;
  Vector x0;
  double t0 = 0.0;
  FractionalOrder order;
};

enum class Quadrature { Rectangle, Simpson };

/// Which s-terms of the order expansion enter the sum besides the closed
/// exponential term. FromZero keeps every s = 0..2q-1; FromOne drops s = 0.
enum class SumRange { FromZero, FromOne };

inline constexpr double kDefaultSimpsonTol = 1e-10;

struct SolveConfig {
  /// Evaluation times, strictly increasing and all > t0.
  std::vector<double> grid;
  Quadrature quadrature = Quadrature::Simpson;
  double simpson_tol = kDefaultSimpsonTol;
  SumRange sum_range = SumRange::FromZero;
  /// Lattice step for the rectangle rule. 0 infers it from the grid. The
  /// lattice t0 + j*step must contain every grid point.
  double step = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  Matrix states;  // one row per time, one column per component

  std::size_t size() const noexcept { return times.size(); }
  Eigen::Index dim() const noexcept { return states.cols(); }
};

// Scalar problems D^alpha y = lambda y, y(t0) = y0.

/// Left-endpoint rectangle discretization of the regularized representation.
/// grid must sit on a uniform lattice t0 + j*h (h inferred when step == 0).
Trajectory solve_scalar_rect(double lambda, double y0, const FractionalOrder& order, double t0,
                             std::span<const double> grid, SumRange sum_range = SumRange::FromZero,
                             double step = 0.0);

/// Same representation with each weakly singular integral mapped through
/// w = (t - tau)^((s+1)/(2q+1)) and integrated by adaptive Simpson.
Trajectory solve_scalar_quad(double lambda, double y0, const FractionalOrder& order, double t0,
                             std::span<const double> times, double simpson_tol = kDefaultSimpsonTol,
                             SumRange sum_range = SumRange::FromZero);

// Matrix problems.

/// Matrix form with A-powers from frac_power and the kernel exponential from
/// expm. Requires a distinct real spectrum without zero eigenvalues.
Trajectory solve_matrix(const CauchyProblem& problem, const SolveConfig& config);

/// Decouples through A = T diag(lambda) T^{-1}, solves each scalar problem
/// for T^{-1} x0 and maps back with T.
Trajectory solve_via_spectral(const CauchyProblem& problem, const SolveConfig& config);

struct PerturbationResult {
  Trajectory trajectory;            // for the smallest eps
  std::vector<double> cauchy_gaps;  // sup-norm gaps between consecutive rungs
};

/// Solves with A + eps*B along a strictly decreasing eps ladder. Throws
/// NonConvergence when a gap grows along the ladder.
PerturbationResult solve_limit_perturbation(const CauchyProblem& problem, const Matrix& B,
                                            std::span<const double> eps_ladder, const SolveConfig& config);

/// x(t) = expm((t - t0) A) x0. A may be singular.
Trajectory classical_exponential(const CauchyProblem& problem, std::span<const double> times);

}  // namespace fracsolve
