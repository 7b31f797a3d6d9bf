#include "fracsolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adaptive_simpson.hpp"
#include "fracsolve/error.hpp"
#include "fracsolve/specfun.hpp"

namespace fracsolve {

namespace {

// The representation expands over s = 0..2q. The s = 2q term integrates in
// closed form to the kernel exponential exp((t - t0) * A^((2q+1)/(2p+1))), so
// only s < 2q needs a weakly singular integral with exponent
// gamma_s = (s - 2q)/(2q + 1) in (-1, 0).
struct ExpansionTerm {
  std::int64_t s = 0;
  double kernel_exponent = 0.0;  // gamma_s
  double kernel_norm = 1.0;      // gamma_s! = Gamma((s + 1)/(2q + 1))
};

std::vector<ExpansionTerm> expansion_terms(const FractionalOrder& order, SumRange range) {
  const auto two_q = static_cast<std::int64_t>(2 * order.q);
  const auto den = static_cast<double>(order.denominator());
  std::vector<ExpansionTerm> terms;
  for (std::int64_t s = (range == SumRange::FromZero ? 0 : 1); s < two_q; ++s) {
    const double g = static_cast<double>(s - two_q) / den;
    terms.push_back({s, g, gfact(g)});
  }
  return terms;
}

void validate_order(const FractionalOrder& order) {
  if (order.p > order.q) {
    throw Error(ErrorCode::OrderDomain, "order numerator 2p+1 exceeds denominator 2q+1");
  }
}

void validate_times(double t0, std::span<const double> times) {
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw Error(ErrorCode::InvalidArgument, "time grid has non-finite entries");
    if (!(times[k] > t0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid time " + std::to_string(times[k]) + " is not after t0; the representation is singular at t0");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be strictly increasing");
    }
  }
}

// Grid points as integer multiples of the rectangle step h above t0.
struct Lattice {
  double h = 0.0;
  std::vector<std::size_t> index;
  std::size_t max_index = 0;
};

Lattice build_lattice(double t0, std::span<const double> grid, double step) {
  Lattice lattice;
  lattice.h = step > 0.0 ? step : (grid.size() >= 2 ? grid[1] - grid[0] : grid[0] - t0);
  if (!(lattice.h > 0.0)) throw Error(ErrorCode::NonUniformGrid, "rectangle step must be positive");
  for (double t : grid) {
    const double ratio = (t - t0) / lattice.h;
    const auto idx = static_cast<long long>(std::llround(ratio));
    if (idx < 1 || std::abs(ratio - static_cast<double>(idx)) > 1e-6 * std::max(1.0, ratio)) {
      throw Error(ErrorCode::NonUniformGrid,
                  "grid time " + std::to_string(t) + " is not on the lattice t0 + j*" + std::to_string(lattice.h));
    }
    lattice.index.push_back(static_cast<std::size_t>(idx));
  }
  lattice.max_index = lattice.index.back();
  return lattice;
}

void require_finite(const Trajectory& traj) {
  if (!traj.states.allFinite()) throw Error(ErrorCode::Overflow, "solution leaves double range");
}

// Same check frac_power applies before any negative power.
void require_nonzero_eigenvalues(const Vector& lambdas) {
  const double scale = std::max(1.0, lambdas.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    if (std::abs(lambdas[i]) <= 1e-13 * scale) {
      throw Error(ErrorCode::ZeroEigenvalue, "A has eigenvalue " + std::to_string(lambdas[i]));
    }
  }
}

void validate_problem(const CauchyProblem& problem) {
  require_square_finite(problem.A, "A");
  if (problem.x0.size() != problem.A.rows()) {
    throw Error(ErrorCode::InvalidArgument, "x0 dimension does not match A");
  }
  if (!problem.x0.allFinite() || !std::isfinite(problem.t0)) {
    throw Error(ErrorCode::InvalidArgument, "x0 and t0 must be finite");
  }
  validate_order(problem.order);
}

// Integral of (u - v)^gamma / gamma! * g(v) over v in [0, u] after the
// substitution w = (u - v)^c, c = gamma + 1, which removes the endpoint
// singularity: it equals (1 / c!) * integral of g(u - w^(1/c)) over [0, u^c].
template <typename T, typename G>
T regularized_kernel_integral(const ExpansionTerm& term, double u, double tol, G g) {
  const double c = term.kernel_exponent + 1.0;
  const double inv_c = 1.0 / c;
  auto integrand = [&](double w) { return g(u - std::pow(w, inv_c)); };
  detail::AdaptiveSimpson<T, decltype(integrand)> simpson(integrand, tol);
  return simpson.integrate(0.0, std::pow(u, c)) / gfact(c);
}

// (j h)^gamma / gamma! for j = 0..count; entry 0 is unused.
std::vector<double> kernel_table(const ExpansionTerm& term, double h, std::size_t count) {
  std::vector<double> table(count + 1, 0.0);
  for (std::size_t j = 1; j <= count; ++j) {
    table[j] = std::pow(static_cast<double>(j) * h, term.kernel_exponent) / term.kernel_norm;
  }
  return table;
}

Trajectory make_trajectory(std::span<const double> times, Eigen::Index n) {
  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states = Matrix::Zero(static_cast<Eigen::Index>(times.size()), n);
  return traj;
}

}  // namespace

Trajectory solve_scalar_rect(double lambda, double y0, const FractionalOrder& order, double t0,
                             std::span<const double> grid, SumRange sum_range, double step) {
  validate_order(order);
  if (lambda == 0.0) throw Error(ErrorCode::ZeroEigenvalue, "lambda = 0 has no negative powers");
  validate_times(t0, grid);
  const Lattice lattice = build_lattice(t0, grid, step);

  const auto num = static_cast<std::int64_t>(order.numerator());
  const auto den = static_cast<std::int64_t>(order.denominator());
  const auto two_q = static_cast<std::int64_t>(2 * order.q);
  const double mu = rpow(lambda, den, num);

  std::vector<double> kernel_exp(lattice.max_index + 1);
  for (std::size_t j = 0; j <= lattice.max_index; ++j) {
    kernel_exp[j] = std::exp(static_cast<double>(j) * lattice.h * mu);
  }

  Trajectory traj = make_trajectory(grid, 1);
  for (std::size_t k = 0; k < grid.size(); ++k) traj.states(static_cast<Eigen::Index>(k), 0) = std::exp(mu * (grid[k] - t0));

  for (const auto& term : expansion_terms(order, sum_range)) {
    const double coef = rpow(lambda, term.s - two_q, num);
    const auto table = kernel_table(term, lattice.h, lattice.max_index);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::size_t top = lattice.index[k];
      double riemann = 0.0;
      for (std::size_t sigma = 0; sigma < top; ++sigma) riemann += table[top - sigma] * kernel_exp[sigma];
      riemann *= lattice.h;
      const double u = grid[k] - t0;
      const double boundary = std::pow(u, term.kernel_exponent) / term.kernel_norm;
      traj.states(static_cast<Eigen::Index>(k), 0) += coef * (boundary + mu * riemann);
    }
  }
  traj.states *= y0;
  require_finite(traj);
  return traj;
}

Trajectory solve_scalar_quad(double lambda, double y0, const FractionalOrder& order, double t0,
                             std::span<const double> times, double simpson_tol, SumRange sum_range) {
  validate_order(order);
  if (lambda == 0.0) throw Error(ErrorCode::ZeroEigenvalue, "lambda = 0 has no negative powers");
  if (!(simpson_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "simpson_tol must be positive");
  validate_times(t0, times);

  const auto num = static_cast<std::int64_t>(order.numerator());
  const auto den = static_cast<std::int64_t>(order.denominator());
  const auto two_q = static_cast<std::int64_t>(2 * order.q);
  const double mu = rpow(lambda, den, num);
  const auto terms = expansion_terms(order, sum_range);

  Trajectory traj = make_trajectory(times, 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double u = times[k] - t0;
    double value = std::exp(mu * u);
    for (const auto& term : terms) {
      const double coef = rpow(lambda, term.s - two_q, num);
      const double integral =
          regularized_kernel_integral<double>(term, u, simpson_tol, [mu](double v) { return std::exp(mu * v); });
      value += coef * (std::pow(u, term.kernel_exponent) / term.kernel_norm + mu * integral);
    }
    traj.states(static_cast<Eigen::Index>(k), 0) = y0 * value;
  }
  require_finite(traj);
  return traj;
}

Trajectory solve_matrix(const CauchyProblem& problem, const SolveConfig& config) {
  validate_problem(problem);
  validate_times(problem.t0, config.grid);
  if (config.quadrature == Quadrature::Simpson && !(config.simpson_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "simpson_tol must be positive");
  }

  const auto eig = eig_real_simple(problem.A);
  require_nonzero_eigenvalues(eig.lambdas);
  const auto n = problem.A.rows();
  const auto num = static_cast<std::int64_t>(problem.order.numerator());
  const auto den = static_cast<std::int64_t>(problem.order.denominator());
  const auto two_q = static_cast<std::int64_t>(2 * problem.order.q);
  const Matrix kernel_generator = frac_power(eig, den, num);  // A^((2q+1)/(2p+1))
  const auto terms = expansion_terms(problem.order, config.sum_range);
  const std::span<const double> grid(config.grid);
  const double t0 = problem.t0;
  const Vector& x0 = problem.x0;

  Trajectory traj = make_trajectory(grid, n);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    traj.states.row(static_cast<Eigen::Index>(k)) = (expm((grid[k] - t0) * kernel_generator) * x0).transpose();
  }

  if (config.quadrature == Quadrature::Rectangle) {
    const Lattice lattice = build_lattice(t0, grid, config.step);
    // expm(sigma h M) x0 depends on the lattice index only; computed once.
    std::vector<Vector> kernel_exp(lattice.max_index + 1);
    for (std::size_t j = 0; j <= lattice.max_index; ++j) {
      kernel_exp[j] = expm(static_cast<double>(j) * lattice.h * kernel_generator) * x0;
    }
    for (const auto& term : terms) {
      const Matrix coef = frac_power(eig, term.s - two_q, num);
      const auto table = kernel_table(term, lattice.h, lattice.max_index);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::size_t top = lattice.index[k];
        Vector riemann = Vector::Zero(n);
        for (std::size_t sigma = 0; sigma < top; ++sigma) riemann += table[top - sigma] * kernel_exp[sigma];
        riemann *= lattice.h;
        const double boundary = std::pow(grid[k] - t0, term.kernel_exponent) / term.kernel_norm;
        const Vector bracket = boundary * x0 + kernel_generator * riemann;
        traj.states.row(static_cast<Eigen::Index>(k)) += (coef * bracket).transpose();
      }
    }
  } else {
    for (const auto& term : terms) {
      const Matrix coef = frac_power(eig, term.s - two_q, num);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double u = grid[k] - t0;
        const Vector integral = regularized_kernel_integral<Vector>(
            term, u, config.simpson_tol, [&](double v) -> Vector { return expm(v * kernel_generator) * x0; });
        const double boundary = std::pow(u, term.kernel_exponent) / term.kernel_norm;
        const Vector bracket = boundary * x0 + kernel_generator * integral;
        traj.states.row(static_cast<Eigen::Index>(k)) += (coef * bracket).transpose();
      }
    }
  }
  require_finite(traj);
  return traj;
}

Trajectory solve_via_spectral(const CauchyProblem& problem, const SolveConfig& config) {
  validate_problem(problem);
  validate_times(problem.t0, config.grid);
  const auto eig = eig_real_simple(problem.A);
  require_nonzero_eigenvalues(eig.lambdas);
  const Vector beta0 = eig.T_inv * problem.x0;
  const auto n = problem.A.rows();

  Matrix modal(static_cast<Eigen::Index>(config.grid.size()), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Solve with unit data and scale afterwards so a zero modal coefficient
    // cannot mask errors such as ZeroEigenvalue.
    const Trajectory scalar =
        config.quadrature == Quadrature::Rectangle
            ? solve_scalar_rect(eig.lambdas[i], 1.0, problem.order, problem.t0, config.grid, config.sum_range,
                                config.step)
            : solve_scalar_quad(eig.lambdas[i], 1.0, problem.order, problem.t0, config.grid, config.simpson_tol,
                                config.sum_range);
    modal.col(i) = scalar.states.col(0) * beta0[i];
  }
  Trajectory traj;
  traj.times = config.grid;
  traj.states = modal * eig.T.transpose();
  require_finite(traj);
  return traj;
}

PerturbationResult solve_limit_perturbation(const CauchyProblem& problem, const Matrix& B,
                                            std::span<const double> eps_ladder, const SolveConfig& config) {
  validate_problem(problem);
  if (eps_ladder.size() < 2) throw Error(ErrorCode::InvalidArgument, "eps ladder needs at least two rungs");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps ladder entries must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "eps ladder must be strictly decreasing");
    }
  }

  PerturbationResult result;
  Trajectory previous;
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    CauchyProblem rung = problem;
    rung.A = perturb_to_simple(problem.A, B, eps_ladder[i]);
    Trajectory current = solve_matrix(rung, config);
    if (i > 0) result.cauchy_gaps.push_back(max_abs(current.states - previous.states));
    previous = std::move(current);
  }
  result.trajectory = std::move(previous);

  const double noise = 1e-12 * std::max(1.0, max_abs(result.trajectory.states));
  for (std::size_t i = 1; i < result.cauchy_gaps.size(); ++i) {
    if (result.cauchy_gaps[i] > result.cauchy_gaps[i - 1] && result.cauchy_gaps[i] > noise) {
      throw Error(ErrorCode::NonConvergence, "ladder gap grew from " + std::to_string(result.cauchy_gaps[i - 1]) +
                                                 " to " + std::to_string(result.cauchy_gaps[i]));
    }
  }
  return result;
}

Trajectory classical_exponential(const CauchyProblem& problem, std::span<const double> times) {
  require_square_finite(problem.A, "A");
  if (problem.x0.size() != problem.A.rows()) {
    throw Error(ErrorCode::InvalidArgument, "x0 dimension does not match A");
  }
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  Trajectory traj = make_trajectory(times, problem.A.rows());
  for (std::size_t k = 0; k < times.size(); ++k) {
    traj.states.row(static_cast<Eigen::Index>(k)) =
        (expm((times[k] - problem.t0) * problem.A) * problem.x0).transpose();
  }
  return traj;
}

}  // namespace fracsolve
