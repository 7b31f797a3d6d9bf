#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracsolve/analysis.hpp"
#include "fracsolve/error.hpp"

using namespace fracsolve;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

Trajectory sampled(double t0, double h, int count, auto&& f) {
  Trajectory tr;
  tr.states.resize(count, 1);
  for (int k = 0; k < count; ++k) {
    tr.times.push_back(t0 + (k + 1) * h);
    tr.states(k, 0) = f(tr.times.back());
  }
  return tr;
}

// Max error of the GL derivative of f against exact on [0.5, 1] (away from the terminal).
double gl_error(double alpha, double h, auto&& f, auto&& exact) {
  const int n = static_cast<int>(std::lround(1.0 / h));
  std::vector<double> samples(n);
  for (int k = 0; k < n; ++k) samples[k] = f((k + 1) * h);
  const auto d = gl_derivative(samples, alpha, h);
  double worst = 0.0;
  for (int k = n / 2; k < n; ++k) worst = std::max(worst, std::abs(d[k] - exact((k + 1) * h)));
  return worst;
}

const std::vector<FractionalOrder> kLadder{order_from_pq(0, 1), order_from_pq(1, 3), order_from_pq(99, 101),
                                           order_from_pq(999, 1001), order_from_pq(0, 0)};

}  // namespace

TEST_CASE("GL weights") {
  for (double a : {0.2, 1.0 / 3.0, 0.5, 1.0}) {
    const auto w = gl_weights(a, 5);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == -a);
  }
  const auto w1 = gl_weights(1.0, 4);
  CHECK(w1[2] == 0.0);
  CHECK(w1[3] == 0.0);
  const auto w = gl_weights(0.5, 200000);
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(std::abs(sum) < 1e-2);
  CHECK(std::abs(sum) < std::abs(w[0] + w[1]));
}

TEST_CASE("GL at alpha = 1 is the backward difference") {
  const double h = 0.01;
  std::vector<double> f(100);
  for (int k = 0; k < 100; ++k) f[k] = (k + 1) * h;
  const auto d = gl_derivative(f, 1.0, h);
  for (int k = 1; k < 100; ++k) CHECK(std::abs(d[k] - 1.0) <= 1e-10);
}

TEST_CASE("GL power rules converge") {
  const auto one = [](double) { return 1.0; };
  const auto id = [](double t) { return t; };
  const auto d_one = [](double t) { return std::pow(t, -0.5) / std::tgamma(0.5); };
  const auto d_id = [](double t) { return std::pow(t, 0.5) / std::tgamma(1.5); };
  double prev_one = INFINITY;
  double prev_id = INFINITY;
  for (double h : {0.02, 0.01, 0.005, 0.0025}) {
    const double e1 = gl_error(0.5, h, one, d_one);
    const double e2 = gl_error(0.5, h, id, d_id);
    CHECK(e1 < prev_one);
    CHECK(e2 < prev_id);
    prev_one = e1;
    prev_id = e2;
  }
  CHECK(prev_one < 0.01);
  CHECK(prev_id < 0.01);
}

TEST_CASE("GL shape checks") {
  CHECK(code_of([] { gl_derivative(std::vector<double>{1.0}, 0.5, 0.1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { gl_derivative(std::vector<double>{1.0, 2.0}, 0.5, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("residual of the exact exponential") {
  const auto tr = sampled(0.0, 0.01, 100, [](double t) { return std::exp(-2.0 * t); });
  Matrix A(1, 1);
  A(0, 0) = -2.0;
  const auto gl = residual_nev(tr, A, 1.0);
  CHECK(gl.nev <= 1e-2 * 4.0);
  CHECK(gl.nev > 1e-4);
  CHECK(gl.skipped_prefix == 1);
  CHECK(gl.grid_step == doctest::Approx(0.01));
  CHECK(residual_nev(tr, A, 1.0, 1, ResidualMode::ExactDifference).nev <= 1e-10);
  CHECK(residual_nev(tr, A, 1.0, 1, ResidualMode::Auto).nev <= 1e-10);
  CHECK(code_of([&] { residual_nev(tr, A, 0.5, 1, ResidualMode::ExactDifference); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("constant trajectory with zero matrix") {
  const auto tr = sampled(0.0, 0.1, 10, [](double) { return 4.0; });
  CHECK(residual_nev(tr, Matrix::Zero(1, 1), 1.0).nev == 0.0);
}

TEST_CASE("residual rejects a non-uniform grid") {
  auto tr = sampled(0.0, 0.1, 5, [](double t) { return t; });
  tr.times[3] += 0.01;
  CHECK(code_of([&] { residual_nev(tr, Matrix::Zero(1, 1), 1.0); }) == ErrorCode::NonUniformGrid);
  CHECK(code_of([&] { residual_nev(tr, Matrix::Zero(1, 1), 1.0, 5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("residual ignores the skipped prefix") {
  const auto tr = sampled(0.0, 0.01, 50, [](double t) { return std::exp(-2.0 * t); });
  Matrix A(1, 1);
  A(0, 0) = -2.0;
  auto spoiled = tr;
  spoiled.states(0, 0) += 10.0;
  spoiled.states(1, 0) -= 3.0;
  // the backward difference only looks one step back
  CHECK(residual_nev(spoiled, A, 1.0, 3, ResidualMode::ExactDifference).nev ==
        residual_nev(tr, A, 1.0, 3, ResidualMode::ExactDifference).nev);
  // Prepending samples does not change the norm over the same tail when they are excluded.
  const auto longer = sampled(0.0, 0.01, 60, [](double t) { return std::exp(-2.0 * t); });
  const auto a = residual_nev(longer, A, 1.0, 11, ResidualMode::ExactDifference).nev;
  Trajectory tail;
  tail.times.assign(longer.times.begin() + 10, longer.times.end());
  tail.states = longer.states.bottomRows(50);
  const auto b = residual_nev(tail, A, 1.0, 1, ResidualMode::ExactDifference).nev;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("stability verdicts") {
  Matrix stable(2, 2);
  stable << -2, 0, 0, -1;
  CHECK(stability_verdict(stable).verdict == Stability::AsymptoticallyStable);
  CHECK(stability_verdict(stable).eigenvalues == std::vector<double>{-2.0, -1.0});
  CHECK(stability_verdict(Matrix::Constant(1, 1, 2.0)).verdict == Stability::Unstable);
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  const auto r = stability_verdict(rot);
  CHECK(r.verdict == Stability::Inconclusive);
  CHECK(r.non_real);
  CHECK(r.eigenvalues.empty());
  Matrix zero(2, 2);
  zero << 0, 0, 0, -1;
  CHECK(stability_verdict(zero).verdict == Stability::Inconclusive);
  Matrix mixed(3, 3);
  mixed << 0, 1, 0, -1, 0, 0, 0, 0, 2;
  CHECK(stability_verdict(mixed).verdict == Stability::Unstable);
}

TEST_CASE("stability is invariant under permutation and similarity") {
  Matrix A(3, 3);
  A << -3, 1, 0, 0, -1, 2, 0, 0, 0.5;
  Matrix P(3, 3);
  P << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  const auto a = stability_verdict(A);
  const auto b = stability_verdict(P * A * P.transpose());
  CHECK(a.verdict == b.verdict);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
    CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-12));
}

TEST_CASE("convergence study on the decaying example") {
  const auto rows = convergence_study(-2.0, kLadder, 0.01, 1.01, 0.01, Quadrature::Rectangle);
  REQUIRE(rows.size() == kLadder.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].order.q == kLadder[i].q);
  CHECK(rows.back().sup_deviation <= 1e-9);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows.back().nev * 1e6 <= rows[i].nev);
  CHECK(rows[0].nev > 1.0);
  CHECK(rows[3].nev < rows[0].nev);
}

TEST_CASE("convergence study on the growing example") {
  const auto rows = convergence_study(2.0, kLadder, 0.01, 1.01, 0.01, Quadrature::Simpson);
  CHECK(rows.back().sup_deviation <= 1e-9);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(rows.back().nev * 1e6 <= rows[i].nev);
    CHECK(rows[i].sup_deviation > 1.0);
  }
}

TEST_CASE("study input checks") {
  CHECK(code_of([] { convergence_study(-2.0, std::vector<FractionalOrder>{}, 0.0, 1.0, 0.1, Quadrature::Simpson); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { uniform_grid(0.0, 1.0, -0.1); }) == ErrorCode::InvalidArgument);
  const auto g = uniform_grid(0.01, 1.01, 0.01);
  CHECK(g.size() == 100);
  CHECK(g.back() == doctest::Approx(1.01));
}
