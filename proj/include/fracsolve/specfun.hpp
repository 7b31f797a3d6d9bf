#pragma once

#include <cstddef>

namespace fracsolve {

/// Gamma function via a Lanczos approximation, with reflection below 1/2.
/// Throws Error(PoleError) at nonpositive integers.
double gamma(double x);

/// Generalized factorial z! = Gamma(z + 1). Relative accuracy around 1e-14
/// on [-0.99, 20].
double gfact(double z);

/// 1/Gamma(x), zero at the poles of Gamma.
double rgamma(double x);

/// Parameters of the two-parameter Mittag-Leffler series
/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha*k + beta).
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
  std::size_t max_terms = 100000;
  double tail_tol = 1e-17;
};

inline constexpr double kMittagLefflerMaxArg = 30.0;

/// Power series evaluation with compensated summation. Absolute error stays
/// near 1e-12 for |z| <= 5; for negative z the alternating terms grow before
/// they decay, so the absolute error grows roughly like eps * max_k |term_k|.
/// Throws DomainError for |z| > 30 and NonConvergence when max_terms is hit.
double mittag_leffler(const MLParams& params, double z);

}  // namespace fracsolve
