#include "fracsolve/rational_order.hpp"

#include <cmath>
#include <string>

#include "fracsolve/error.hpp"

namespace fracsolve {

namespace {

double odd_ratio_error(std::uint64_t num, std::uint64_t den, double alpha) {
  return std::abs(static_cast<double>(num) / static_cast<double>(den) - alpha);
}

}  // namespace

FractionalOrder approximate_order(double alpha, double tol, std::uint64_t q_max) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (q_max < 1) throw Error(ErrorCode::InvalidArgument, "q_max must be at least 1");

  for (std::uint64_t q = 0; q <= q_max; ++q) {
    const std::uint64_t den = 2 * q + 1;
    // The two odd integers bracketing alpha*den; the best odd numerator is one of them.
    const auto floor_target = static_cast<std::uint64_t>(std::floor(alpha * static_cast<double>(den)));
    const std::uint64_t lo = (floor_target % 2 == 1) ? floor_target : (floor_target == 0 ? 1 : floor_target - 1);
    const std::uint64_t candidates[2] = {lo, lo + 2};

    bool found = false;
    std::uint64_t best_num = 0;
    double best_err = 0.0;
    for (std::uint64_t num : candidates) {
      if (num < 1 || num > den) continue;
      const double err = odd_ratio_error(num, den, alpha);
      if (!found || err < best_err) {
        found = true;
        best_num = num;
        best_err = err;
      }
    }
    if (found && best_err <= tol) {
      return FractionalOrder{alpha, (best_num - 1) / 2, q, best_err};
    }
  }
  throw Error(ErrorCode::NoRepresentation,
              "no (2p+1)/(2q+1) with q <= " + std::to_string(q_max) + " within " + std::to_string(tol) +
                  " of alpha = " + std::to_string(alpha));
}

FractionalOrder order_from_pq(std::uint64_t p, std::uint64_t q) {
  if (p > q) {
    throw Error(ErrorCode::OrderDomain,
                "(2p+1)/(2q+1) exceeds 1 for p = " + std::to_string(p) + ", q = " + std::to_string(q));
  }
  FractionalOrder order{0.0, p, q, 0.0};
  order.alpha = order.value();
  return order;
}

}  // namespace fracsolve
