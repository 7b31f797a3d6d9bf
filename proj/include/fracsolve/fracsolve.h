/*
 * C interface to the fracsolve library: solvers for D^alpha x = A x with a
 * constant real matrix A and order alpha = (2p+1)/(2q+1) in (0, 1].
 *
 * Every fallible call returns fs_status. On failure, fs_last_error() holds a
 * message for the calling thread until its next failing call. Handles are
 * opaque and owned by the caller; release them with the matching _destroy.
 * Matrices are passed as n*n doubles in row-major order.
 */
#ifndef FRACSOLVE_H
#define FRACSOLVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(FRACSOLVE_BUILDING_LIBRARY)
#define FRACSOLVE_API __attribute__((visibility("default")))
#else
#define FRACSOLVE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_INVALID_ARGUMENT = 1,
  FS_NO_REPRESENTATION = 2,
  FS_POLE_ERROR = 3,
  FS_DOMAIN_ERROR = 4,
  FS_NON_CONVERGENCE = 5,
  FS_COMPLEX_SPECTRUM = 6,
  FS_CLUSTERED_SPECTRUM = 7,
  FS_SINGULAR_EIGENVECTORS = 8,
  FS_SINGULAR = 9,
  FS_OVERFLOW = 10,
  FS_ZERO_EIGENVALUE = 11,
  FS_ORDER_DOMAIN = 12,
  FS_QUADRATURE_FAILURE = 13,
  FS_NON_UNIFORM_GRID = 14,
  FS_INTERNAL_ERROR = 15
} fs_status;

/* Variant name, e.g. "ZeroEigenvalue". Never NULL. */
FRACSOLVE_API const char* fs_status_name(fs_status status);
FRACSOLVE_API const char* fs_last_error(void);

/* ---- fractional order ------------------------------------------------- */

typedef struct fs_order {
  double alpha;
  uint64_t p;
  uint64_t q;
  double achieved_error; /* |(2p+1)/(2q+1) - alpha| */
} fs_order;

FRACSOLVE_API fs_status fs_approximate_order(double alpha, double tol, uint64_t q_max, fs_order* out);
FRACSOLVE_API fs_status fs_order_from_pq(uint64_t p, uint64_t q, fs_order* out);

/* ---- special functions ------------------------------------------------ */

FRACSOLVE_API fs_status fs_gfact(double z, double* out);
FRACSOLVE_API fs_status fs_mittag_leffler(double alpha, double beta, double z, double* out);
FRACSOLVE_API fs_status fs_mittag_leffler_ex(double alpha, double beta, double z, size_t max_terms, double tail_tol,
                                             double* out);

/* ---- problems and trajectories ---------------------------------------- */

typedef struct fs_problem fs_problem;
typedef struct fs_trajectory fs_trajectory;

FRACSOLVE_API fs_status fs_problem_create(size_t n, const double* a, const double* x0, double t0,
                                          const fs_order* order, fs_problem** out);
FRACSOLVE_API void fs_problem_destroy(fs_problem* problem);
FRACSOLVE_API size_t fs_problem_dim(const fs_problem* problem);

typedef enum fs_quadrature { FS_RECTANGLE = 0, FS_SIMPSON = 1 } fs_quadrature;
typedef enum fs_sum_range { FS_SUM_FROM_ZERO = 0, FS_SUM_FROM_ONE = 1 } fs_sum_range;

typedef struct fs_solve_config {
  fs_quadrature quadrature;
  double simpson_tol;
  fs_sum_range sum_range;
  double step; /* rectangle lattice step; 0 infers it from the grid */
} fs_solve_config;

/* Simpson, simpson_tol = 1e-10, sum from s = 0, inferred step. */
FRACSOLVE_API void fs_solve_config_default(fs_solve_config* config);

/* Matrix representation with expm and fractional matrix powers. */
FRACSOLVE_API fs_status fs_solve(const fs_problem* problem, const double* times, size_t count,
                                 const fs_solve_config* config, fs_trajectory** out);
/* Same representation computed mode by mode through A = T diag T^-1. */
FRACSOLVE_API fs_status fs_solve_spectral(const fs_problem* problem, const double* times, size_t count,
                                          const fs_solve_config* config, fs_trajectory** out);
/* expm((t - t0) A) x0; order ignored, A may be singular. */
FRACSOLVE_API fs_status fs_solve_classical(const fs_problem* problem, const double* times, size_t count,
                                           fs_trajectory** out);
/* Solves with A + eps*B for each eps (strictly decreasing). gaps receives
 * eps_count - 1 sup-norm gaps between consecutive rungs; the trajectory is the
 * smallest-eps one. */
FRACSOLVE_API fs_status fs_solve_perturbed(const fs_problem* problem, const double* b, const double* eps,
                                           size_t eps_count, const double* times, size_t count,
                                           const fs_solve_config* config, fs_trajectory** out, double* gaps);
/* Scalar D^alpha y = lambda y, y(t0) = y0. */
FRACSOLVE_API fs_status fs_solve_scalar(double lambda, double y0, const fs_order* order, double t0,
                                        const double* times, size_t count, const fs_solve_config* config,
                                        fs_trajectory** out);

FRACSOLVE_API size_t fs_trajectory_length(const fs_trajectory* traj);
FRACSOLVE_API size_t fs_trajectory_dim(const fs_trajectory* traj);
FRACSOLVE_API const double* fs_trajectory_times(const fs_trajectory* traj);
/* length * dim doubles, one row per time. */
FRACSOLVE_API const double* fs_trajectory_states(const fs_trajectory* traj);
FRACSOLVE_API void fs_trajectory_destroy(fs_trajectory* traj);

/* ---- diagnostics ------------------------------------------------------ */

typedef enum fs_stability { FS_STABLE = 0, FS_UNSTABLE = 1, FS_INCONCLUSIVE = 2 } fs_stability;

/* eigenvalues (may be NULL) receives up to n ascending real eigenvalues;
 * *eigen_count is 0 and *non_real is 1 when the spectrum is not real. */
FRACSOLVE_API fs_status fs_stability_verdict(size_t n, const double* a, fs_stability* verdict, double* eigenvalues,
                                             size_t* eigen_count, int* non_real);
FRACSOLVE_API const char* fs_stability_name(fs_stability verdict);

typedef enum fs_residual_mode {
  FS_RESIDUAL_GRUNWALD_LETNIKOV = 0,
  FS_RESIDUAL_EXACT_DIFFERENCE = 1,
  FS_RESIDUAL_AUTO = 2
} fs_residual_mode;

typedef struct fs_residual_report {
  double nev;
  double grid_step;
  size_t skipped_prefix;
} fs_residual_report;

FRACSOLVE_API fs_status fs_residual_nev(const fs_trajectory* traj, const double* a, double alpha, size_t skip,
                                        fs_residual_mode mode, fs_residual_report* out);
FRACSOLVE_API fs_status fs_gl_derivative(const double* samples, size_t count, double alpha, double h, double* out);

typedef struct fs_study_row {
  fs_order order;
  double sup_deviation;
  double nev;
} fs_study_row;

/* rows must hold order_count entries. */
FRACSOLVE_API fs_status fs_convergence_study(double a, const fs_order* orders, size_t order_count, double t0,
                                             double t_end, double h, fs_quadrature backend, double simpson_tol,
                                             fs_study_row* rows);

#ifdef __cplusplus
}
#endif

#endif /* FRACSOLVE_H */
