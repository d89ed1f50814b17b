#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <iomanip>

#include "doctest.h"
#include "interlace/decoupling.hpp"
#include "interlace/error.hpp"

using namespace interlace;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// log f(l0) in 50-digit arithmetic: direct sum of log(1 + a j^-3/2) for
// j <= J, then Euler-Maclaurin for the rest with the integral expanded in
// powers of a.
Big big_log_f(int d, double c1, double l0, long J) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  using boost::multiprecision::log1p;
  using boost::multiprecision::pow;
  const Big a = Big(32) * exp(Big(2)) * pow(Big(c1), d) * pow(Big(l0), -Big(d - 3) / 2);
  Big s = 0;
  for (long j = 1; j <= J; ++j) s += log1p(a * pow(Big(j), Big(-1.5)));
  const Big N = Big(J + 1);
  Big integral = 0;  // int_N^inf log(1 + a x^-3/2) dx
  for (int m = 1; m <= 12; ++m) {
    const Big term = pow(a, m) / m * pow(N, 1 - Big(1.5) * m) / (Big(1.5) * m - 1);
    integral += (m % 2) ? term : Big(-term);
  }
  const Big fN = log1p(a * pow(N, Big(-1.5)));
  const Big dfN = -Big(1.5) * a * pow(N, Big(-2.5)) / (1 + a * pow(N, Big(-1.5)));
  return s + integral + fN / 2 - dfN / 12;
}

}  // namespace

TEST_CASE("sprinkle factor against a high-precision product") {
  ScaleParams p;
  p.d = 5;
  p.c1 = 2;
  p.l0 = 1e4;
  const auto f = sprinkle_factor(p);
  const double oracle = static_cast<double>(big_log_f(5, 2, 1e4, 200000));
  MESSAGE("log f(1e4) = " << std::setprecision(17) << f.log_value << " oracle " << oracle << " bound " << f.tail_bound);
  CHECK(std::abs(f.log_value - oracle) <= 1e-12 * std::abs(oracle));
  CHECK(std::abs(f.log_value - oracle) <= f.tail_bound + 1e-15);
  // Regression value from the high-precision oracle above.
  CHECK(f.value == doctest::Approx(std::exp(oracle)).epsilon(1e-12));
}

TEST_CASE("sprinkle factor is stable under cutoff doubling") {
  ScaleParams p;
  for (double l0 : {1e4, 1e7, 1e9}) {
    p.l0 = l0;
    const auto a = sprinkle_factor(p, 1 << 14);
    const auto b = sprinkle_factor(p, 1 << 15);
    CHECK(std::abs(a.log_value - b.log_value) <= a.tail_bound + b.tail_bound);
    CHECK(std::abs(a.value - b.value) <= 1e-10 * a.value);
  }
}

TEST_CASE("sprinkle factor limits and monotonicity") {
  ScaleParams p;
  p.d = 5;
  p.c1 = 2;
  p.l0 = 1e9;
  CHECK(sprinkle_factor(p).value < 1 + 1e-3);
  double prev = INFINITY;
  for (double l0 : {1e3, 1e4, 1e5, 1e6, 1e8}) {
    p.l0 = l0;
    const double v = sprinkle_factor(p).value;
    CHECK(v < prev);
    CHECK(v > 1);
    prev = v;
  }
  p.d = 3;
  CHECK_THROWS_AS(sprinkle_factor(p), ConfigError);
  p.d = 5;
  p.l0 = 1.0;
  CHECK_THROWS_AS(sprinkle_factor(p), ConfigError);
  p.l0 = 2.0;  // a is huge: the tail series needs a larger cutoff
  CHECK_THROWS_AS(sprinkle_factor(p, 16), NumericError);
}

TEST_CASE("epsilon") {
  CHECK(epsilon_of_x(std::log(2.0)) == 2.0);
  CHECK(epsilon_of_x(20) < 1e-6);
  CHECK(epsilon_u(1.0, 1.0, std::log(2.0), 3) == 2.0);
  double prev = INFINITY;
  for (double u = 0.01; u < 3; u += 0.1) {
    const double e = epsilon_u(u, 3, 0.1, 5);
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(epsilon_of_x(0), ConfigError);
  CHECK_THROWS_AS(epsilon_u(-1, 3, 10, 5), ConfigError);
}

TEST_CASE("scales and admissibility") {
  ScaleParams p;
  CHECK(p.L(0) == 3);
  CHECK(p.L(2) == doctest::Approx(3e14));
  CHECK(p.l0_admissible());  // 1e7 >= 1e6 sqrt(5) 2
  p.l0 = 4e6;
  CHECK(!p.l0_admissible());
  CHECK(p.L0_admissible());
  p.L0 = 2;
  CHECK(!p.L0_admissible());
}

TEST_CASE("decoupling right-hand side") {
  ScaleParams p;
  p.l0 = 100;
  const auto f = sprinkle_factor(p);
  const double u = 0.05, p0 = 1e-20;
  const auto r0 = decoupling_rhs(p, u, p0, 0, f);
  const double eps = epsilon_u(u / f.value, p.L0, p.l0, p.d);
  CHECK(r0.rhs == doctest::Approx(p.C1 * std::pow(p.l0, 2 * p.lambda) * (p0 + eps)).epsilon(1e-12));
  CHECK(r0.u_minus == doctest::Approx(u / f.value).epsilon(1e-15));
  for (int n = 0; n < 30; ++n) {
    const auto a = decoupling_rhs(p, u, p0, n, f);
    const auto b = decoupling_rhs(p, u, p0, n + 1, f);
    CHECK(std::abs(b.log_rhs - 2 * a.log_rhs) <= 1e-12 * std::abs(b.log_rhs));
    CHECK(b.log_target == 2 * a.log_target);
  }
  // Below e^-1 at n = 0 implies below e^-2^n for every n.
  if (r0.log_rhs <= -1)
    for (int n = 0; n <= 40; ++n) CHECK(decoupling_rhs(p, u, p0, n, f).below_target);
  CHECK_THROWS_AS(decoupling_rhs(p, u, 1.5, 0, f), ConfigError);
  CHECK_THROWS_AS(decoupling_rhs(p, u, 0.1, -1, f), ConfigError);
}

TEST_CASE("log-space rhs matches high-precision evaluation") {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  ScaleParams p;
  p.l0 = 1e3;
  const auto f = sprinkle_factor(p);
  for (double u : {0.001, 0.01, 0.3}) {
    for (double p0 : {0.0, 1e-30, 1e-3}) {
      for (int n = 0; n <= 20; ++n) {
        const auto r = decoupling_rhs(p, u, p0, n, f);
        const Big x = Big(u / f.value) * pow(Big(p.L0), p.d - 2) * Big(p.l0);
        const Big eps = 2 * exp(-x) / (1 - exp(-x));
        const Big base = Big(p.C1) * pow(Big(p.l0), Big(2 * p.lambda)) * (Big(p0) + eps);
        const Big direct = pow(base, std::ldexp(1.0, n));
        const double want = static_cast<double>(log(direct));
        CHECK(std::abs(r.log_rhs - want) <= 1e-10 * std::abs(want));
      }
    }
  }
}

TEST_CASE("planner checks") {
  ScaleParams p;
  p.C1 = 1e-3;
  p.l0 = 1.0 + 1e-9;
  p.d = 5;
  auto r = decoupling_rhs(p, 5.0, 0.0, 0, SprinkleFactor{});
  CHECK(r.planner_epsilon);  // eps(5 * 27 * 1) is tiny
  CHECK(r.planner_boundary == (p.c * p.C1 * std::pow(p.l0, 6) * std::pow(5.0, -6) <= 1 / (2 * std::exp(1.0))));
  p.C1 = 10;
  p.l0 = 1e7;
  r = decoupling_rhs(p, 1.0, 0.0, 0, SprinkleFactor{});
  CHECK(!r.planner_boundary);
}
