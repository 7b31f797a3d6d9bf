#pragma once

#include <cstdint>

namespace fracsolve {

/// Fractional order alpha together with its odd-over-odd representation
/// (2p+1)/(2q+1). Odd denominators keep every power of a negative eigenvalue
/// real.
struct FractionalOrder {
  double alpha = 1.0;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  double achieved_error = 0.0;

  std::uint64_t numerator() const noexcept { return 2 * p + 1; }
  std::uint64_t denominator() const noexcept { return 2 * q + 1; }
  /// (2p+1)/(2q+1) as a double.
  double value() const noexcept {
    return static_cast<double>(numerator()) / static_cast<double>(denominator());
  }
  bool is_classical() const noexcept { return q == 0; }
};

inline constexpr double kDefaultOrderTol = 1e-6;
inline constexpr std::uint64_t kDefaultOrderQMax = 100000;

/// Smallest q <= q_max for which some odd numerator 2p+1 <= 2q+1 lies within
/// tol of alpha. Ties within one q go to the smaller error, then smaller p.
/// Throws Error(NoRepresentation) when nothing qualifies.
FractionalOrder approximate_order(double alpha, double tol = kDefaultOrderTol,
                                  std::uint64_t q_max = kDefaultOrderQMax);

/// Exact order (2p+1)/(2q+1); throws Error(OrderDomain) when p > q.
FractionalOrder order_from_pq(std::uint64_t p, std::uint64_t q);

}  // namespace fracsolve
