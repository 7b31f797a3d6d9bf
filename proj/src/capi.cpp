#include "fracsolve/fracsolve.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "fracsolve/analysis.hpp"
#include "fracsolve/error.hpp"
#include "fracsolve/rational_order.hpp"
#include "fracsolve/solver.hpp"
#include "fracsolve/specfun.hpp"

struct fs_problem {
  fracsolve::CauchyProblem problem;
};

struct fs_trajectory {
  std::vector<double> times;
  std::vector<double> states;  // row-major
  std::size_t dim = 0;
};

namespace {

using fracsolve::ErrorCode;

thread_local std::string g_last_error;

fs_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return FS_INVALID_ARGUMENT;
    case ErrorCode::NoRepresentation: return FS_NO_REPRESENTATION;
    case ErrorCode::PoleError: return FS_POLE_ERROR;
    case ErrorCode::DomainError: return FS_DOMAIN_ERROR;
    case ErrorCode::NonConvergence: return FS_NON_CONVERGENCE;
    case ErrorCode::ComplexSpectrum: return FS_COMPLEX_SPECTRUM;
    case ErrorCode::ClusteredSpectrum: return FS_CLUSTERED_SPECTRUM;
    case ErrorCode::SingularEigenvectors: return FS_SINGULAR_EIGENVECTORS;
    case ErrorCode::Singular: return FS_SINGULAR;
    case ErrorCode::Overflow: return FS_OVERFLOW;
    case ErrorCode::ZeroEigenvalue: return FS_ZERO_EIGENVALUE;
    case ErrorCode::OrderDomain: return FS_ORDER_DOMAIN;
    case ErrorCode::QuadratureFailure: return FS_QUADRATURE_FAILURE;
    case ErrorCode::NonUniformGrid: return FS_NON_UNIFORM_GRID;
  }
  return FS_INTERNAL_ERROR;
}

fs_status fail(fs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body and converts any exception into a status code.
template <typename Body>
fs_status guarded(Body&& body) noexcept {
  try {
    body();
    return FS_OK;
  } catch (const fracsolve::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FS_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(FS_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(FS_INTERNAL_ERROR, "unknown exception");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw fracsolve::Error(ErrorCode::InvalidArgument, message);
}

fracsolve::Matrix read_matrix(std::size_t n, const double* data) {
  require(n > 0 && data != nullptr, "matrix data must be non-null with n > 0");
  const auto dim = static_cast<Eigen::Index>(n);
  fracsolve::Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = data[i * dim + j];
  return m;
}

fracsolve::FractionalOrder read_order(const fs_order* order) {
  require(order != nullptr, "order must be non-null");
  return fracsolve::FractionalOrder{order->alpha, order->p, order->q, order->achieved_error};
}

fs_order write_order(const fracsolve::FractionalOrder& order) {
  return fs_order{order.alpha, order.p, order.q, order.achieved_error};
}

fracsolve::SolveConfig read_config(const fs_solve_config* config, const double* times, std::size_t count) {
  require(times != nullptr && count > 0, "time grid must be non-empty");
  fracsolve::SolveConfig out;
  out.grid.assign(times, times + count);
  if (config != nullptr) {
    out.quadrature = config->quadrature == FS_RECTANGLE ? fracsolve::Quadrature::Rectangle
                                                        : fracsolve::Quadrature::Simpson;
    out.simpson_tol = config->simpson_tol;
    out.sum_range = config->sum_range == FS_SUM_FROM_ONE ? fracsolve::SumRange::FromOne
                                                         : fracsolve::SumRange::FromZero;
    out.step = config->step;
  }
  return out;
}

fs_trajectory* wrap(const fracsolve::Trajectory& traj) {
  auto* out = new fs_trajectory;
  out->times = traj.times;
  out->dim = static_cast<std::size_t>(traj.dim());
  out->states.resize(traj.size() * out->dim);
  for (std::size_t k = 0; k < traj.size(); ++k)
    for (std::size_t i = 0; i < out->dim; ++i)
      out->states[k * out->dim + i] = traj.states(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
  return out;
}

fracsolve::Trajectory unwrap(const fs_trajectory& traj) {
  fracsolve::Trajectory out;
  out.times = traj.times;
  const auto rows = static_cast<Eigen::Index>(traj.times.size());
  const auto cols = static_cast<Eigen::Index>(traj.dim);
  out.states.resize(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index i = 0; i < cols; ++i) out.states(k, i) = traj.states[static_cast<std::size_t>(k * cols + i)];
  return out;
}

}  // namespace

extern "C" {

FRACSOLVE_API const char* fs_status_name(fs_status status) {
  switch (status) {
    case FS_OK: return "Ok";
    case FS_INVALID_ARGUMENT: return "InvalidArgument";
    case FS_NO_REPRESENTATION: return "NoRepresentation";
    case FS_POLE_ERROR: return "PoleError";
    case FS_DOMAIN_ERROR: return "DomainError";
    case FS_NON_CONVERGENCE: return "NonConvergence";
    case FS_COMPLEX_SPECTRUM: return "ComplexSpectrum";
    case FS_CLUSTERED_SPECTRUM: return "ClusteredSpectrum";
    case FS_SINGULAR_EIGENVECTORS: return "SingularEigenvectors";
    case FS_SINGULAR: return "Singular";
    case FS_OVERFLOW: return "Overflow";
    case FS_ZERO_EIGENVALUE: return "ZeroEigenvalue";
    case FS_ORDER_DOMAIN: return "OrderDomain";
    case FS_QUADRATURE_FAILURE: return "QuadratureFailure";
    case FS_NON_UNIFORM_GRID: return "NonUniformGrid";
    case FS_INTERNAL_ERROR: return "InternalError";
  }
  return "InternalError";
}

FRACSOLVE_API const char* fs_last_error(void) { return g_last_error.c_str(); }

FRACSOLVE_API fs_status fs_approximate_order(double alpha, double tol, uint64_t q_max, fs_order* out) {
  return guarded([&] {
    require(out != nullptr, "out must be non-null");
    *out = write_order(fracsolve::approximate_order(alpha, tol, q_max));
  });
}

FRACSOLVE_API fs_status fs_order_from_pq(uint64_t p, uint64_t q, fs_order* out) {
  return guarded([&] {
    require(out != nullptr, "out must be non-null");
    *out = write_order(fracsolve::order_from_pq(p, q));
  });
}

FRACSOLVE_API fs_status fs_gfact(double z, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must be non-null");
    *out = fracsolve::gfact(z);
  });
}

FRACSOLVE_API fs_status fs_mittag_leffler(double alpha, double beta, double z, double* out) {
  const fracsolve::MLParams defaults;
  return fs_mittag_leffler_ex(alpha, beta, z, defaults.max_terms, defaults.tail_tol, out);
}

FRACSOLVE_API fs_status fs_mittag_leffler_ex(double alpha, double beta, double z, size_t max_terms, double tail_tol,
                                             double* out) {
  return guarded([&] {
    require(out != nullptr, "out must be non-null");
    require(max_terms > 0, "max_terms must be positive");
    *out = fracsolve::mittag_leffler({alpha, beta, max_terms, tail_tol}, z);
  });
}

FRACSOLVE_API fs_status fs_problem_create(size_t n, const double* a, const double* x0, double t0,
                                          const fs_order* order, fs_problem** out) {
  return guarded([&] {
    require(out != nullptr && x0 != nullptr, "x0 and out must be non-null");
    fracsolve::CauchyProblem problem;
    problem.A = read_matrix(n, a);
    fracsolve::require_square_finite(problem.A, "A");
    problem.x0 = Eigen::Map<const fracsolve::Vector>(x0, static_cast<Eigen::Index>(n));
    problem.t0 = t0;
    problem.order = read_order(order);
    if (problem.order.p > problem.order.q) {
      throw fracsolve::Error(ErrorCode::OrderDomain, "order numerator 2p+1 exceeds denominator 2q+1");
    }
    *out = new fs_problem{std::move(problem)};
  });
}

FRACSOLVE_API void fs_problem_destroy(fs_problem* problem) { delete problem; }

FRACSOLVE_API size_t fs_problem_dim(const fs_problem* problem) {
  return problem == nullptr ? 0 : static_cast<size_t>(problem->problem.A.rows());
}

FRACSOLVE_API void fs_solve_config_default(fs_solve_config* config) {
  if (config == nullptr) return;
  config->quadrature = FS_SIMPSON;
  config->simpson_tol = fracsolve::kDefaultSimpsonTol;
  config->sum_range = FS_SUM_FROM_ZERO;
  config->step = 0.0;
}

FRACSOLVE_API fs_status fs_solve(const fs_problem* problem, const double* times, size_t count,
                                 const fs_solve_config* config, fs_trajectory** out) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr, "problem and out must be non-null");
    *out = wrap(fracsolve::solve_matrix(problem->problem, read_config(config, times, count)));
  });
}

FRACSOLVE_API fs_status fs_solve_spectral(const fs_problem* problem, const double* times, size_t count,
                                          const fs_solve_config* config, fs_trajectory** out) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr, "problem and out must be non-null");
    *out = wrap(fracsolve::solve_via_spectral(problem->problem, read_config(config, times, count)));
  });
}

FRACSOLVE_API fs_status fs_solve_classical(const fs_problem* problem, const double* times, size_t count,
                                           fs_trajectory** out) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr && times != nullptr, "problem, times and out must be non-null");
    *out = wrap(fracsolve::classical_exponential(problem->problem, std::span<const double>(times, count)));
  });
}

FRACSOLVE_API fs_status fs_solve_perturbed(const fs_problem* problem, const double* b, const double* eps,
                                           size_t eps_count, const double* times, size_t count,
                                           const fs_solve_config* config, fs_trajectory** out, double* gaps) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr && eps != nullptr, "problem, eps and out must be non-null");
    const auto n = static_cast<size_t>(problem->problem.A.rows());
    const auto result = fracsolve::solve_limit_perturbation(problem->problem, read_matrix(n, b),
                                                            std::span<const double>(eps, eps_count),
                                                            read_config(config, times, count));
    if (gaps != nullptr) {
      for (size_t i = 0; i < result.cauchy_gaps.size(); ++i) gaps[i] = result.cauchy_gaps[i];
    }
    *out = wrap(result.trajectory);
  });
}

FRACSOLVE_API fs_status fs_solve_scalar(double lambda, double y0, const fs_order* order, double t0,
                                        const double* times, size_t count, const fs_solve_config* config,
                                        fs_trajectory** out) {
  return guarded([&] {
    require(out != nullptr, "out must be non-null");
    const auto cfg = read_config(config, times, count);
    const auto ord = read_order(order);
    *out = wrap(cfg.quadrature == fracsolve::Quadrature::Rectangle
                    ? fracsolve::solve_scalar_rect(lambda, y0, ord, t0, cfg.grid, cfg.sum_range, cfg.step)
                    : fracsolve::solve_scalar_quad(lambda, y0, ord, t0, cfg.grid, cfg.simpson_tol, cfg.sum_range));
  });
}

FRACSOLVE_API size_t fs_trajectory_length(const fs_trajectory* traj) {
  return traj == nullptr ? 0 : traj->times.size();
}

FRACSOLVE_API size_t fs_trajectory_dim(const fs_trajectory* traj) { return traj == nullptr ? 0 : traj->dim; }

FRACSOLVE_API const double* fs_trajectory_times(const fs_trajectory* traj) {
  return traj == nullptr ? nullptr : traj->times.data();
}

FRACSOLVE_API const double* fs_trajectory_states(const fs_trajectory* traj) {
  return traj == nullptr ? nullptr : traj->states.data();
}

FRACSOLVE_API void fs_trajectory_destroy(fs_trajectory* traj) { delete traj; }

FRACSOLVE_API fs_status fs_stability_verdict(size_t n, const double* a, fs_stability* verdict, double* eigenvalues,
                                             size_t* eigen_count, int* non_real) {
  return guarded([&] {
    require(verdict != nullptr, "verdict must be non-null");
    const auto result = fracsolve::stability_verdict(read_matrix(n, a));
    switch (result.verdict) {
      case fracsolve::Stability::AsymptoticallyStable: *verdict = FS_STABLE; break;
      case fracsolve::Stability::Unstable: *verdict = FS_UNSTABLE; break;
      case fracsolve::Stability::Inconclusive: *verdict = FS_INCONCLUSIVE; break;
    }
    if (eigenvalues != nullptr) {
      for (size_t i = 0; i < result.eigenvalues.size(); ++i) eigenvalues[i] = result.eigenvalues[i];
    }
    if (eigen_count != nullptr) *eigen_count = result.eigenvalues.size();
    if (non_real != nullptr) *non_real = result.non_real ? 1 : 0;
  });
}

FRACSOLVE_API const char* fs_stability_name(fs_stability verdict) {
  switch (verdict) {
    case FS_STABLE: return "AsymptoticallyStable";
    case FS_UNSTABLE: return "Unstable";
    case FS_INCONCLUSIVE: return "Inconclusive";
  }
  return "Inconclusive";
}

FRACSOLVE_API fs_status fs_residual_nev(const fs_trajectory* traj, const double* a, double alpha, size_t skip,
                                        fs_residual_mode mode, fs_residual_report* out) {
  return guarded([&] {
    require(traj != nullptr && out != nullptr, "trajectory and out must be non-null");
    fracsolve::ResidualMode m = fracsolve::ResidualMode::GrunwaldLetnikov;
    if (mode == FS_RESIDUAL_EXACT_DIFFERENCE) m = fracsolve::ResidualMode::ExactDifference;
    if (mode == FS_RESIDUAL_AUTO) m = fracsolve::ResidualMode::Auto;
    const auto report = fracsolve::residual_nev(unwrap(*traj), read_matrix(traj->dim, a), alpha, skip, m);
    *out = fs_residual_report{report.nev, report.grid_step, report.skipped_prefix};
  });
}

FRACSOLVE_API fs_status fs_gl_derivative(const double* samples, size_t count, double alpha, double h, double* out) {
  return guarded([&] {
    require(samples != nullptr && out != nullptr, "samples and out must be non-null");
    const auto d = fracsolve::gl_derivative(std::span<const double>(samples, count), alpha, h);
    for (size_t i = 0; i < d.size(); ++i) out[i] = d[i];
  });
}

FRACSOLVE_API fs_status fs_convergence_study(double a, const fs_order* orders, size_t order_count, double t0,
                                             double t_end, double h, fs_quadrature backend, double simpson_tol,
                                             fs_study_row* rows) {
  return guarded([&] {
    require(orders != nullptr && rows != nullptr, "orders and rows must be non-null");
    std::vector<fracsolve::FractionalOrder> list;
    for (size_t i = 0; i < order_count; ++i) list.push_back(read_order(&orders[i]));
    const auto result = fracsolve::convergence_study(
        a, list, t0, t_end, h,
        backend == FS_RECTANGLE ? fracsolve::Quadrature::Rectangle : fracsolve::Quadrature::Simpson, simpson_tol);
    for (size_t i = 0; i < result.size(); ++i) {
      rows[i] = fs_study_row{write_order(result[i].order), result[i].sup_deviation, result[i].nev};
    }
  });
}

}  // extern "C"
