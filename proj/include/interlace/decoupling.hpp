#pragma once

#include <cstddef>

namespace interlace {

// Scale parameters of the sprinkling/decoupling machinery. The constants
// c0, c1, C1 and c are free inputs; the defaults are placeholders, not values
// established anywhere.
struct ScaleParams {
  int d = 5;
  double l0 = 1e7;
  double L0 = 3;
  double lambda = 3;
  double C1 = 10;
  double c0 = 2;
  double c1 = 2;
  double c = 6;  // boundary-count constant |d*_int B^3_inf(0, L0)| <= c d

  double L(int n) const;                  // l0^n L0
  bool l0_admissible() const;             // l0 >= 1e6 sqrt(d) c0
  bool L0_admissible() const;             // L0 >= sqrt(d)
};

struct SprinkleFactor {
  double value = 1;       // f(l0)
  double log_value = 0;   // log f(l0)
  double tail_bound = 0;  // bound on |log f - log_value|
  std::size_t cutoff = 0; // factors k < cutoff summed directly
};

// f(l0) = prod_{k>=0} (1 + a (k+1)^{-3/2}), a = 32 e^2 c1^d l0^{-(d-3)/2}.
// Direct log-sum over k < cutoff, then the alternating series
// sum_m (-1)^{m+1} a^m / m * zeta(3m/2, cutoff+1) for the rest. Throws
// ConfigError for d <= 3 or l0 <= 1, NumericError if a / (cutoff+1)^{3/2}
// is not small enough for the tail series.
SprinkleFactor sprinkle_factor(const ScaleParams& p, std::size_t cutoff = 1 << 16);

// eps(u) = 2 e^{-x} / (1 - e^{-x}), x = u L0^{d-2} l0. Throws ConfigError if x <= 0.
double epsilon_u(double u, double L0, double l0, int d);
// Same with x given directly.
double epsilon_of_x(double x);

struct DecouplingRhs {
  double u_minus = 0;        // u / f(l0)
  double epsilon = 0;        // eps(u_minus)
  double log_base = 0;       // log(C1 l0^{2 lambda} (p0 + eps))
  double log_rhs = 0;        // 2^n log_base
  double rhs = 0;            // exp(log_rhs), may underflow to 0 or overflow to inf
  double log_target = 0;     // -2^n, the log of e^{-2^n}
  bool below_target = false; // log_rhs <= log_target
  // Planner conditions with lambda = 3:
  // c C1 l0^6 d^-6 <= 1/(2e) and C1 l0^6 eps <= 1/(2e).
  bool planner_boundary = false;
  bool planner_epsilon = false;
};

// (C1 l0^{2 lambda})^{2^n} (p0 + eps(u / f(l0)))^{2^n}, in log space.
DecouplingRhs decoupling_rhs(const ScaleParams& p, double u, double p0, int n, const SprinkleFactor& f);
DecouplingRhs decoupling_rhs(const ScaleParams& p, double u, double p0, int n);

}  // namespace interlace
