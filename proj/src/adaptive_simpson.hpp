#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracsolve/error.hpp"

namespace fracsolve::detail {

inline constexpr int kMaxSimpsonDepth = 50;
inline constexpr int kMinSimpsonDepth = 2;

template <typename T>
std::size_t component_count(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return 1;
  } else {
    return static_cast<std::size_t>(v.size());
  }
}

template <typename T>
decltype(auto) component(T& v, std::size_t i) {
  if constexpr (std::is_arithmetic_v<std::remove_const_t<T>>) {
    return (v);
  } else {
    return (v[static_cast<Eigen::Index>(i)]);
  }
}

/// Adaptive Simpson with Richardson correction. T is double or an Eigen
/// vector. Each component is refined on its own until its error estimate
/// falls below tol times the three-point estimate of the integral of |f| for
/// that component. The test is scale invariant, so a vector integrand follows
/// the subdivisions its components would take one at a time.
template <typename T, typename F>
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(F f, double tol) : f_(std::move(f)), tol_(tol) {}

  T integrate(double a, double b) {
    const T fa = f_(a);
    const T fb = f_(b);
    const double m = 0.5 * (a + b);
    const T fm = f_(m);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const std::size_t n = component_count(whole);
    std::vector<double> tol(n);
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) {
      tol[i] = tol_ * (b - a) / 6.0 *
               (std::abs(component(fa, i)) + 4.0 * std::abs(component(fm, i)) + std::abs(component(fb, i)));
      active[i] = i;
    }
    T out = whole;
    refine(a, b, fa, fm, fb, whole, tol, 0, active, out);
    return out;
  }

 private:
  void refine(double a, double b, const T& fa, const T& fm, const T& fb, const T& whole,
              const std::vector<double>& tol, int depth, const std::vector<std::size_t>& active, T& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f_(lm);
    const T frm = f_(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);

    std::vector<std::size_t> pending;
    for (std::size_t i : active) {
      const double both = component(left, i) + component(right, i);
      const double delta = both - component(whole, i);
      // Below a few ulps of the running value no further splitting can help.
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(both);
      if (depth >= kMinSimpsonDepth && std::abs(delta) <= 15.0 * std::max(tol[i], floor)) {
        component(out, i) = both + delta / 15.0;
      } else {
        pending.push_back(i);
      }
    }
    if (pending.empty()) return;
    if (depth >= kMaxSimpsonDepth) {
      throw Error(ErrorCode::QuadratureFailure, "adaptive Simpson exceeded depth " +
                                                    std::to_string(kMaxSimpsonDepth) + " near [" + std::to_string(a) +
                                                    ", " + std::to_string(b) + "]");
    }
    std::vector<double> half(tol);
    for (double& t : half) t *= 0.5;
    T lo = out;
    T hi = out;
    refine(a, m, fa, flm, fm, left, half, depth + 1, pending, lo);
    refine(m, b, fm, frm, fb, right, half, depth + 1, pending, hi);
    for (std::size_t i : pending) component(out, i) = component(lo, i) + component(hi, i);
  }

  F f_;
  double tol_;
};

}  // namespace fracsolve::detail
