#include "fracsolve/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fracsolve/error.hpp"

namespace fracsolve {

namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_series(double x) {
  // x here is the shifted argument of Gamma(x + 1).
  double a = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) a += kLanczosCoef[i] / (x + static_cast<double>(i));
  return a;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with argument reduction so that zeros at the integers are exact.
double sin_pi(double x) {
  const double n = std::round(x);
  const double r = x - n;
  const double s = std::sin(std::numbers::pi * r);
  return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

// Gamma(x) for x >= 0.5.
double gamma_positive(double x) {
  if (x == std::floor(x) && x <= 23.0) {
    // (x-1)! is exact in double up to 22!.
    double f = 1.0;
    for (double k = 2.0; k < x; k += 1.0) f *= k;
    return f;
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  // Split the power so t^(x-1/2) does not overflow before Gamma itself does.
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * lanczos_series(xm1);
}

// log Gamma(x) for x >= 0.5.
double lgamma_positive(double x) {
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_series(xm1));
}

class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) {
    throw Error(ErrorCode::PoleError, "Gamma has a pole at " + std::to_string(x));
  }
  if (x < 0.5) {
    return std::numbers::pi / (sin_pi(x) * gamma_positive(1.0 - x));
  }
  return gamma_positive(x);
}

double gfact(double z) { return gamma(z + 1.0); }

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 0.5) return sin_pi(x) * gamma_positive(1.0 - x) / std::numbers::pi;
  if (x > 170.0) return std::exp(-lgamma_positive(x));
  return 1.0 / gamma_positive(x);
}

double mittag_leffler(const MLParams& params, double z) {
  if (!(params.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "Mittag-Leffler alpha must be positive");
  if (!(params.tail_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail_tol must be positive");
  if (!std::isfinite(z) || std::abs(z) > kMittagLefflerMaxArg) {
    throw Error(ErrorCode::DomainError, "|z| must not exceed 30, got z = " + std::to_string(z));
  }

  if (z == 0.0) return rgamma(params.beta);

  const double log_abs_z = std::log(std::abs(z));
  NeumaierSum sum;
  double previous = INFINITY;
  for (std::size_t k = 0; k < params.max_terms; ++k) {
    const double arg = params.alpha * static_cast<double>(k) + params.beta;
    double term = 0.0;
    if (k == 0) {
      term = rgamma(arg);
    } else if (arg < 150.0 && static_cast<double>(k) * log_abs_z < 600.0) {
      term = std::pow(z, static_cast<double>(k)) * rgamma(arg);
    } else if (!is_nonpositive_integer(arg)) {
      const double sign = (z < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
      term = sign * std::exp(static_cast<double>(k) * log_abs_z - lgamma_positive(arg));
    }
    sum.add(term);

    // Past the minimum of Gamma and with terms shrinking, the remainder is
    // dominated by the current term.
    const double mag = std::abs(term);
    const double scale = std::max(1.0, std::abs(sum.value()));
    if (arg >= 2.0 && mag <= previous && mag <= params.tail_tol * scale) return sum.value();
    previous = mag;
  }
  throw Error(ErrorCode::NonConvergence,
              "Mittag-Leffler series did not reach tail_tol within " + std::to_string(params.max_terms) + " terms");
}

}  // namespace fracsolve
