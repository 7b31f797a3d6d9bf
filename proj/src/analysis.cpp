#include "fracsolve/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracsolve/error.hpp"

namespace fracsolve {

std::vector<double> gl_weights(double alpha, std::size_t count) {
  std::vector<double> w(count);
  if (count == 0) return w;
  w[0] = 1.0;
  for (std::size_t j = 1; j < count; ++j) w[j] = w[j - 1] * ((static_cast<double>(j) - 1.0 - alpha) / static_cast<double>(j));
  return w;
}

std::vector<double> gl_derivative(std::span<const double> samples, double alpha, double h) {
  if (samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "GL derivative needs at least two samples");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "GL step must be positive");
  const auto w = gl_weights(alpha, samples.size());
  const double scale = std::pow(h, -alpha);
  std::vector<double> out(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += w[j] * samples[k - j];
    out[k] = scale * acc;
  }
  return out;
}

namespace {

double uniform_step(const std::vector<double>& times) {
  if (times.size() < 2) throw Error(ErrorCode::NonUniformGrid, "residual needs at least two time points");
  const double h = times[1] - times[0];
  if (!(h > 0.0)) throw Error(ErrorCode::NonUniformGrid, "time points must increase");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs((times[k] - times[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(times[k]))) {
      throw Error(ErrorCode::NonUniformGrid, "time step changes at t = " + std::to_string(times[k]));
    }
  }
  return h;
}

}  // namespace

ResidualReport residual_nev(const Trajectory& traj, const Matrix& A, double alpha, std::size_t skip,
                            ResidualMode mode) {
  require_square_finite(A, "A");
  if (traj.dim() != A.rows()) throw Error(ErrorCode::InvalidArgument, "trajectory dimension does not match A");
  if (skip >= traj.size()) throw Error(ErrorCode::InvalidArgument, "skip must be smaller than the trajectory length");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  const double h = uniform_step(traj.times);

  if (mode == ResidualMode::Auto) mode = alpha == 1.0 ? ResidualMode::ExactDifference : ResidualMode::GrunwaldLetnikov;

  const auto K = static_cast<Eigen::Index>(traj.size());
  const auto n = traj.dim();
  Matrix derivative(K, n);
  Matrix rhs;
  if (mode == ResidualMode::ExactDifference) {
    if (alpha != 1.0) throw Error(ErrorCode::InvalidArgument, "exact-difference residual requires alpha = 1");
    if (skip < 1) throw Error(ErrorCode::InvalidArgument, "exact-difference residual needs skip >= 1");
    derivative.row(0).setZero();
    for (Eigen::Index k = 1; k < K; ++k) derivative.row(k) = (traj.states.row(k) - traj.states.row(k - 1)) / h;
    const auto n_rows = A.rows();
    const Matrix one_step = (Matrix::Identity(n_rows, n_rows) - expm(-h * A)) / h;
    rhs = traj.states * one_step.transpose();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<double> column(traj.states.col(i).data(), traj.states.col(i).data() + K);
      const auto d = gl_derivative(column, alpha, h);
      for (Eigen::Index k = 0; k < K; ++k) derivative(k, i) = d[static_cast<std::size_t>(k)];
    }
    rhs = traj.states * A.transpose();
  }

  ResidualReport report;
  report.grid_step = h;
  report.skipped_prefix = skip;
  const auto tail = K - static_cast<Eigen::Index>(skip);
  report.nev = (derivative.bottomRows(tail) - rhs.bottomRows(tail)).cwiseAbs().maxCoeff();
  if (!std::isfinite(report.nev)) throw Error(ErrorCode::Overflow, "residual is not finite");
  return report;
}

StabilityVerdict stability_verdict(const Matrix& A) {
  require_square_finite(A, "A");
  const double scale = 1.0 + max_abs(A);
  const Eigen::VectorXcd values = A.eigenvalues();

  StabilityVerdict out;
  bool any_positive = false;
  bool all_negative = true;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i].imag()) > 1e-8 * scale) {
      out.non_real = true;
      all_negative = false;
      continue;
    }
    const double re = values[i].real();
    if (re > 1e-12 * scale) any_positive = true;
    if (!(re < -1e-12 * scale)) all_negative = false;
    out.eigenvalues.push_back(re);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  if (out.non_real) out.eigenvalues.clear();

  if (any_positive) {
    out.verdict = Stability::Unstable;
  } else if (all_negative) {
    out.verdict = Stability::AsymptoticallyStable;
  } else {
    out.verdict = Stability::Inconclusive;
  }
  return out;
}

std::vector<double> uniform_grid(double t0, double t_end, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  if (!(t_end > t0)) throw Error(ErrorCode::InvalidArgument, "grid end must be after t0");
  const auto count = static_cast<std::size_t>(std::floor((t_end - t0) / h + 1e-9));
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "grid step exceeds the interval");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = t0 + static_cast<double>(k + 1) * h;
  return grid;
}

std::vector<StudyRow> convergence_study(double a, std::span<const FractionalOrder> orders, double t0, double t_end,
                                        double h, Quadrature backend, double simpson_tol) {
  if (orders.empty()) throw Error(ErrorCode::InvalidArgument, "study needs at least one order");
  const auto grid = uniform_grid(t0, t_end, h);
  Matrix A(1, 1);
  A(0, 0) = a;

  std::vector<StudyRow> rows;
  rows.reserve(orders.size());
  for (const auto& order : orders) {
    const Trajectory traj = backend == Quadrature::Rectangle
                                ? solve_scalar_rect(a, 1.0, order, t0, grid, SumRange::FromZero, h)
                                : solve_scalar_quad(a, 1.0, order, t0, grid, simpson_tol);
    StudyRow row;
    row.order = order;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double reference = std::exp(a * (grid[k] - t0));
      row.sup_deviation =
          std::max(row.sup_deviation, std::abs(traj.states(static_cast<Eigen::Index>(k), 0) - reference));
    }
    row.nev = residual_nev(traj, A, order.value(), kDefaultResidualSkip, ResidualMode::Auto).nev;
    rows.push_back(row);
  }
  return rows;
}

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::AsymptoticallyStable: return "AsymptoticallyStable";
    case Stability::Unstable: return "Unstable";
    case Stability::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace fracsolve
