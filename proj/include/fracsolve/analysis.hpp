#pragma once

#include <span>
#include <vector>

#include "fracsolve/linalg.hpp"
#include "fracsolve/rational_order.hpp"
#include "fracsolve/solver.hpp"

namespace fracsolve {

/// Grunwald-Letnikov weights w_0 = 1, w_j = w_{j-1} (1 - (alpha + 1)/j).
std::vector<double> gl_weights(double alpha, std::size_t count);

/// h^-alpha * sum_{j<=k} w_j f_{k-j} for every index k. samples[0] sits one
/// step above the lower terminal of the derivative.
std::vector<double> gl_derivative(std::span<const double> samples, double alpha, double h);

enum class ResidualMode {
  GrunwaldLetnikov,
  /// alpha = 1 only: backward difference against the exact one-step flow
  /// (I - expm(-hA))/h, so an exact exponential has zero residual.
  ExactDifference,
  /// ExactDifference when alpha == 1, GrunwaldLetnikov otherwise.
  Auto,
};

enum class NormKind { MaxAbs };

struct ResidualReport {
  double nev = 0.0;
  NormKind norm_kind = NormKind::MaxAbs;
  double grid_step = 0.0;
  std::size_t skipped_prefix = 0;
};

inline constexpr std::size_t kDefaultResidualSkip = 1;

/// max over k >= skip of max_i |(D^alpha x)_i(t_k) - (A x(t_k))_i|.
/// Throws NonUniformGrid when the trajectory times are not equally spaced.
ResidualReport residual_nev(const Trajectory& traj, const Matrix& A, double alpha,
                            std::size_t skip = kDefaultResidualSkip,
                            ResidualMode mode = ResidualMode::GrunwaldLetnikov);

enum class Stability { AsymptoticallyStable, Unstable, Inconclusive };

struct StabilityVerdict {
  Stability verdict = Stability::Inconclusive;
  std::vector<double> eigenvalues;  // ascending; empty when non_real
  bool non_real = false;
};

/// Real spectrum entirely negative: stable. Any real positive eigenvalue:
/// unstable. Anything else (non-real pair, zero eigenvalue): inconclusive.
StabilityVerdict stability_verdict(const Matrix& A);

struct StudyRow {
  FractionalOrder order;
  double sup_deviation = 0.0;  // sup_k |x(t_k) - x0 e^{a (t_k - t0)}|
  double nev = 0.0;
};

/// Solves the scalar problem D^alpha x = a x, x(t0) = 1 on t0 + h, ..., t_end
/// for each order and reports its deviation from e^{a(t-t0)} and its
/// residual (Auto mode, skip 1). Rows keep the input order.
std::vector<StudyRow> convergence_study(double a, std::span<const FractionalOrder> orders, double t0, double t_end,
                                        double h, Quadrature backend, double simpson_tol = kDefaultSimpsonTol);

/// t0 + h, t0 + 2h, ... up to t_end (inclusive, with rounding slack).
std::vector<double> uniform_grid(double t0, double t_end, double h);

std::string_view to_string(Stability s) noexcept;

}  // namespace fracsolve
