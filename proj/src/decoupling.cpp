#include "interlace/decoupling.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "interlace/error.hpp"

namespace interlace {

double ScaleParams::L(int n) const { return std::pow(l0, n) * L0; }
bool ScaleParams::l0_admissible() const { return l0 >= 1e6 * std::sqrt(double(d)) * c0; }
bool ScaleParams::L0_admissible() const { return L0 >= std::sqrt(double(d)); }

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0, comp = 0, abs = 0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    abs += std::abs(v);
  }
  double value() const { return sum + comp; }
};

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log eps for x = u L0^{d-2} l0 > 0.
double log_epsilon(double x) {
  if (x > 1) return std::log(2.0) - x - std::log1p(-std::exp(-x));
  return std::log(2.0 / std::expm1(x));
}

}  // namespace

SprinkleFactor sprinkle_factor(const ScaleParams& p, std::size_t cutoff) {
  if (p.d <= 3) throw ConfigError("sprinkle factor diverges for d <= 3");
  if (!(p.l0 > 1)) throw ConfigError("sprinkle factor needs l0 > 1");
  if (!(p.c1 > 0)) throw ConfigError("sprinkle factor needs c1 > 0");
  if (cutoff < 1) throw ConfigError("sprinkle cutoff must be positive");
  const double e2 = std::exp(2.0);
  const double log_a = std::log(32.0 * e2) + p.d * std::log(p.c1) - 0.5 * (p.d - 3) * std::log(p.l0);
  const double a = std::exp(log_a);
  const double K1 = static_cast<double>(cutoff) + 1.0;
  const double t_tail = a * std::pow(K1, -1.5);
  if (!(t_tail <= 0.5))
    throw NumericError("sprinkle cutoff too small: a / (cutoff+1)^1.5 = " + std::to_string(t_tail));

  CompensatedSum s;
  for (std::size_t k = 0; k < cutoff; ++k) s.add(std::log1p(a * std::pow(static_cast<double>(k + 1), -1.5)));

  // Alternating tail series; terms decrease because a / (K+1)^{3/2} <= 1/2.
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  double zeta_err = 0;
  double omitted = 0;
  for (int m = 1; m < 200; ++m) {
    gsl_sf_result r;
    const int status = gsl_sf_hzeta_e(1.5 * m, K1, &r);
    if (status != GSL_SUCCESS && status != GSL_EUNDRFLW) {
      gsl_set_error_handler(old);
      throw NumericError("Hurwitz zeta failed in the sprinkle tail");
    }
    const double coef = std::exp(m * log_a) / m;
    const double term = coef * r.val;
    zeta_err += coef * r.err;
    if (term <= std::numeric_limits<double>::epsilon() * 1e-3 * std::abs(s.value()) || term == 0.0) {
      omitted = term;
      break;
    }
    s.add(m % 2 == 1 ? term : -term);
    omitted = term;  // refreshed when the loop ends by exhaustion
  }
  gsl_set_error_handler(old);

  SprinkleFactor f;
  f.cutoff = cutoff;
  f.log_value = s.value();
  f.value = std::exp(f.log_value);
  const double eps = std::numeric_limits<double>::epsilon();
  f.tail_bound = omitted + zeta_err + 4 * eps * s.abs + eps * std::abs(f.log_value);
  return f;
}

double epsilon_of_x(double x) {
  if (!(x > 0)) throw ConfigError("epsilon(u) needs u L0^(d-2) l0 > 0");
  return 2.0 / std::expm1(x);
}

double epsilon_u(double u, double L0, double l0, int d) {
  return epsilon_of_x(u * std::pow(L0, d - 2) * l0);
}

DecouplingRhs decoupling_rhs(const ScaleParams& p, double u, double p0, int n, const SprinkleFactor& f) {
  if (!(p0 >= 0 && p0 <= 1)) throw ConfigError("seed probability must lie in [0, 1]");
  if (n < 0 || n > 1000) throw ConfigError("scale index n must lie in [0, 1000]");
  if (!(p.C1 > 0) || !(p.l0 > 0) || !(p.lambda > 0)) throw ConfigError("C1, l0 and lambda must be positive");
  DecouplingRhs r;
  r.u_minus = u / f.value;
  const double x = r.u_minus * std::pow(p.L0, p.d - 2) * p.l0;
  if (!(x > 0)) throw ConfigError("epsilon(u) needs u L0^(d-2) l0 > 0");
  r.epsilon = epsilon_of_x(x);
  const double log_p0 = p0 > 0 ? std::log(p0) : -std::numeric_limits<double>::infinity();
  const double log_eps = log_epsilon(x);
  r.log_base = std::log(p.C1) + 2 * p.lambda * std::log(p.l0) + log_add(log_p0, log_eps);
  const double scale = std::ldexp(1.0, n);
  r.log_rhs = scale * r.log_base;
  r.rhs = std::exp(r.log_rhs);
  r.log_target = -scale;
  r.below_target = r.log_rhs <= r.log_target;
  const double bound = -std::log(2 * std::numbers::e);
  const double log_C1l06 = std::log(p.C1) + 6 * std::log(p.l0);
  r.planner_boundary = std::log(p.c) + log_C1l06 - 6 * std::log(double(p.d)) <= bound;
  r.planner_epsilon = log_C1l06 + log_eps <= bound;
  return r;
}

DecouplingRhs decoupling_rhs(const ScaleParams& p, double u, double p0, int n) {
  return decoupling_rhs(p, u, p0, n, sprinkle_factor(p));
}

}  // namespace interlace
