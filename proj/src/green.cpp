#include "interlace/green.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "interlace/binary_io.hpp"
#include "interlace/error.hpp"
#include "interlace/parallel.hpp"
#include "interlace/rng.hpp"

namespace interlace {

namespace {

struct BesselProduct {
  int d;
  std::array<int, kMaxDim> orders;
};

double bessel_integrand(double s, void* params) {
  const auto* p = static_cast<const BesselProduct*>(params);
  double v = p->d;
  for (int i = 0; i < p->d; ++i) {
    v *= gsl_sf_bessel_In_scaled(p->orders[static_cast<std::size_t>(i)], s);
    if (v == 0.0) break;
  }
  return v;
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

// d * int_S^inf prod_j e^-s I_{n_j}(s) ds from e^-s I_n(s) ~ (2 pi s)^(-1/2)
// sum_k (-1)^k a_k(n) s^-k, a_k(n) = prod_{m<=k} (4n^2 - (2m-1)^2) / (k! 8^k).
// Returns the value and the size of the first omitted term.
std::pair<double, double> bessel_tail(const BesselProduct& p, double S) {
  constexpr int K = 10;
  std::array<double, K + 1> prod{};
  prod[0] = 1.0;
  for (int j = 0; j < p.d; ++j) {
    const double n2 = 4.0 * p.orders[static_cast<std::size_t>(j)] * p.orders[static_cast<std::size_t>(j)];
    std::array<double, K + 1> series{};
    series[0] = 1.0;
    for (int k = 1; k <= K; ++k) series[static_cast<std::size_t>(k)] =
        -series[static_cast<std::size_t>(k - 1)] * (n2 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
    std::array<double, K + 1> next{};
    for (int a = 0; a <= K; ++a)
      for (int b = 0; a + b <= K; ++b)
        next[static_cast<std::size_t>(a + b)] += prod[static_cast<std::size_t>(a)] * series[static_cast<std::size_t>(b)];
    prod = next;
  }
  const double half_d = 0.5 * p.d;
  const double lead = p.d * std::pow(2.0 * std::numbers::pi, -half_d);
  double value = 0, last = 0;
  for (int k = 0; k <= K; ++k) {
    const double term = lead * prod[static_cast<std::size_t>(k)] * std::pow(S, 1.0 - half_d - k) / (half_d + k - 1.0);
    if (k < K)
      value += term;
    else
      last = std::abs(term);
  }
  return {value, last};
}

bool gsl_ok(int status, double abserr, double tolerance) {
  return status == GSL_SUCCESS || (status == GSL_EROUND && abserr <= tolerance);
}

}  // namespace

double green_value(int d, const LatticePoint& x, double tolerance) {
  if (d < 3 || d > kMaxDim) throw ConfigError("green_value requires 3 <= d <= " + std::to_string(kMaxDim));
  if (x.dim() != d) throw ConfigError("green_value: point dimension mismatch");
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  BesselProduct params{d, {}};
  double r2 = 0;
  for (int i = 0; i < d; ++i) {
    params.orders[static_cast<std::size_t>(i)] = std::abs(x[i]);
    r2 += static_cast<double>(x[i]) * x[i];
  }
  gsl_function f{&bessel_integrand, &params};
  constexpr std::size_t limit = 4000;
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(gsl_integration_workspace_alloc(limit));

  // Quadrature on [0, S], where the integrand ~ s^(-d/2) exp(-|x|^2 / 2s)
  // peaks near |x|^2 / d; the tail [S, inf) is integrated term by term from
  // the large-s expansion of the Bessel product.
  int max_order = 0;
  for (int i = 0; i < d; ++i) max_order = std::max(max_order, params.orders[static_cast<std::size_t>(i)]);
  const double split = std::max({200.0, 4.0 * r2, 50.0 * max_order * max_order});
  double head = 0, head_err = 0;
  const double part_tol = 0.5 * tolerance;
  const int s1 = gsl_integration_qag(&f, 0.0, split, part_tol, 0.0, limit, GSL_INTEG_GAUSS41, ws.get(), &head,
                                     &head_err);
  const auto [tail, tail_err] = bessel_tail(params, split);
  const double err = head_err + tail_err;
  if (!gsl_ok(s1, head_err, part_tol) || err > tolerance) {
    std::ostringstream os;
    os << "green_value" << x.str() << ": tolerance " << tolerance << " not reached, error estimate " << err;
    throw NumericError(os.str());
  }
  return head + tail;
}

double green_constant(int d) {
  return 0.5 * d * std::tgamma(0.5 * d - 1.0) * std::pow(std::numbers::pi, -0.5 * d);
}

double green_asymptotic(int d, double r) { return green_constant(d) * std::pow(r, 2.0 - d); }

GreenTable::GreenTable(int d, int radius, GreenMethod method, double tolerance, std::vector<double> orthant)
    : d_(d), radius_(radius), method_(method), tolerance_(tolerance), side_(static_cast<std::size_t>(radius) + 1),
      orthant_(std::move(orthant)) {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= side_;
  if (orthant_.size() != n) throw ConfigError("GreenTable: orthant array has wrong size");
}

double GreenTable::operator()(const LatticePoint& x) const {
  if (x.dim() != d_) throw ConfigError("GreenTable: dimension mismatch");
  if (!covers(x)) {
    throw CoverageError("Green table (radius " + std::to_string(radius_) + ") does not cover difference vector " +
                        x.str());
  }
  return unchecked(x);
}

namespace {

LatticePoint orthant_point(int d, std::size_t side, std::size_t idx) {
  LatticePoint p(d);
  for (int i = d - 1; i >= 0; --i) {
    p[i] = static_cast<int>(idx % side);
    idx /= side;
  }
  return p;
}

LatticePoint canonical(const LatticePoint& x) {
  LatticePoint c = x;
  std::array<int, kMaxDim> v{};
  for (int i = 0; i < x.dim(); ++i) v[static_cast<std::size_t>(i)] = std::abs(x[i]);
  std::sort(v.begin(), v.begin() + x.dim(), std::greater<>());
  for (int i = 0; i < x.dim(); ++i) c[i] = v[static_cast<std::size_t>(i)];
  return c;
}

bool is_canonical(const LatticePoint& p) {
  for (int i = 1; i < p.dim(); ++i)
    if (p[i] > p[i - 1]) return false;
  return true;
}

std::vector<LatticePoint> canonical_classes(int d, int radius) {
  std::vector<LatticePoint> out;
  std::size_t side = static_cast<std::size_t>(radius) + 1, n = 1;
  for (int i = 0; i < d; ++i) n *= side;
  for (std::size_t idx = 0; idx < n; ++idx) {
    auto p = orthant_point(d, side, idx);
    if (is_canonical(p)) out.push_back(p);
  }
  return out;
}

std::vector<double> fan_out(int d, int radius, const std::map<LatticePoint, double>& values) {
  std::size_t side = static_cast<std::size_t>(radius) + 1, n = 1;
  for (int i = 0; i < d; ++i) n *= side;
  std::vector<double> orthant(n);
  for (std::size_t idx = 0; idx < n; ++idx) orthant[idx] = values.at(canonical(orthant_point(d, side, idx)));
  return orthant;
}

GreenTable build_by_quadrature(int d, int radius, const GreenBuildOptions& opt) {
  const auto classes = canonical_classes(d, radius);
  std::vector<double> vals(classes.size());
  parallel_for(classes.size(), thread_count(),
               [&](std::size_t i) { vals[i] = green_value(d, classes[i], opt.tolerance); });
  std::map<LatticePoint, double> values;
  for (std::size_t i = 0; i < classes.size(); ++i) values.emplace(classes[i], vals[i]);
  return GreenTable(d, radius, GreenMethod::quadrature, opt.tolerance, fan_out(d, radius, values));
}

// Solves g - P g = delta_0 inside B_inf(0, M) with g = C_d |x|^(2-d) on the
// box surface, by conjugate gradients on the interior unknowns.
GreenTable build_by_dirichlet(int d, int radius, const GreenBuildOptions& opt) {
  const int M = opt.solve_radius > 0 ? opt.solve_radius : std::max(3 * radius, 32);
  if (M < 3 * radius) throw ConfigError("Dirichlet box radius must be at least 3 * table radius");
  const Window box = Window::box(d, M);
  const std::size_t n = box.size();
  std::vector<char> interior(n);
  std::vector<double> fixed(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePoint p = box.site(i);
    interior[i] = norm_linf(p) < M;
    if (!interior[i]) fixed[i] = green_asymptotic(d, norm_l2(p));
  }
  const double inv2d = 1.0 / (2.0 * d);
  auto neighbor_sum = [&](const std::vector<double>& v, std::size_t i) {
    double s = 0;
    for (int a = 0; a < d; ++a) {
      const std::size_t st = box.stride(a);
      s += v[i - st] + v[i + st];
    }
    return s;
  };
  // b = delta_0 + (1/2d) * (boundary neighbors)
  std::vector<double> b(n, 0.0), x(n, 0.0), r(n, 0.0), p(n, 0.0), Ap(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (interior[i]) b[i] = inv2d * neighbor_sum(fixed, i);
  b[box.index(LatticePoint(d))] += 1.0;
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = interior[i] ? v[i] - inv2d * neighbor_sum(v, i) : 0.0;
  };
  r = b;
  p = r;
  double rr = 0, bb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rr += r[i] * r[i];
    bb += b[i] * b[i];
  }
  const double stop = opt.solve_tolerance * opt.solve_tolerance * bb;
  std::size_t it = 0;
  for (; it < 20 * n && rr > stop; ++it) {
    apply(p, Ap);
    double pAp = 0;
    for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
    const double alpha = rr / pAp;
    double rr_new = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
      rr_new += r[i] * r[i];
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  if (rr > stop) throw NumericError("Dirichlet solve did not converge");

  std::size_t side = static_cast<std::size_t>(radius) + 1, m = 1;
  for (int i = 0; i < d; ++i) m *= side;
  std::vector<double> orthant(m);
  for (std::size_t idx = 0; idx < m; ++idx) orthant[idx] = x[box.index(orthant_point(d, side, idx))];
  GreenTable table(d, radius, GreenMethod::dirichlet_solve, opt.solve_tolerance, std::move(orthant));

  const auto classes = canonical_classes(d, radius);
  Philox rng(opt.seed, 0);
  for (int k = 0; k < opt.cross_checks; ++k) {
    const auto& c = classes[rng.below(static_cast<std::uint32_t>(classes.size()))];
    const double ref = green_value(d, c, std::min(opt.tolerance, 1e-10));
    const double got = table(c);
    if (std::abs(got - ref) > opt.cross_check_relative * std::abs(ref)) {
      std::ostringstream os;
      os << "Dirichlet Green table failed cross-validation at " << c.str() << ": solve " << got << ", quadrature "
         << ref;
      throw NumericError(os.str());
    }
  }
  return table;
}

}  // namespace

std::vector<std::pair<LatticePoint, double>> GreenTable::classes() const {
  std::vector<std::pair<LatticePoint, double>> out;
  for (const auto& c : canonical_classes(d_, radius_)) out.emplace_back(c, unchecked(c));
  return out;
}

GreenTable build_green_table(int d, int radius, GreenMethod method, const GreenBuildOptions& options) {
  if (d < 3 || d > kMaxDim) throw ConfigError("Green table dimension out of range");
  if (radius < 1) throw ConfigError("Green table radius must be >= 1");
  return method == GreenMethod::quadrature ? build_by_quadrature(d, radius, options)
                                           : build_by_dirichlet(d, radius, options);
}

namespace {
constexpr std::uint32_t kGreenVersion = 1;
}

void save_green_table(const GreenTable& table, const std::filesystem::path& path) {
  binio::Writer w;
  w.bytes("GRNT");
  w.u32(kGreenVersion);
  w.u32(static_cast<std::uint32_t>(table.dim()));
  w.u32(static_cast<std::uint32_t>(table.radius()));
  w.u8(static_cast<std::uint8_t>(table.method()));
  w.f64(table.tolerance());
  const auto classes = table.classes();
  w.u64(classes.size());
  for (const auto& [x, g] : classes) {
    for (int i = 0; i < x.dim(); ++i) w.i32(x[i]);
    w.f64(g);
  }
  binio::write_with_crc(path, w);
}

GreenTable load_green_table(const std::filesystem::path& path) {
  std::vector<char> buf;
  const std::size_t payload = binio::read_with_crc(path, buf);
  binio::Reader r(buf, payload);
  if (r.bytes(4) != "GRNT") throw IoError("not a Green table file: " + path.string());
  if (r.u32() != kGreenVersion) throw IoError("Green table version mismatch: " + path.string());
  const int d = static_cast<int>(r.u32());
  const int radius = static_cast<int>(r.u32());
  const auto method = static_cast<GreenMethod>(r.u8());
  const double tol = r.f64();
  if (d < 3 || d > kMaxDim || radius < 1) throw IoError("corrupt Green table header: " + path.string());
  const std::uint64_t count = r.u64();
  std::map<LatticePoint, double> values;
  for (std::uint64_t k = 0; k < count; ++k) {
    LatticePoint x(d);
    for (int i = 0; i < d; ++i) x[i] = r.i32();
    values[canonical(x)] = r.f64();
  }
  if (!r.at_end()) throw IoError("trailing bytes in Green table: " + path.string());
  try {
    return GreenTable(d, radius, method, tol, fan_out(d, radius, values));
  } catch (const std::out_of_range&) {
    throw IoError("Green table is missing symmetry classes: " + path.string());
  }
}

GreenTable load_or_build_green_table(const std::filesystem::path& path, int d, int radius, GreenMethod method,
                                     const GreenBuildOptions& options) {
  if (std::filesystem::exists(path)) {
    try {
      auto t = load_green_table(path);
      if (t.dim() == d && t.radius() >= radius && t.method() == method) return t;
    } catch (const IoError&) {
      // rebuild below
    }
  }
  auto t = build_green_table(d, radius, method, options);
  save_green_table(t, path);
  return t;
}

}  // namespace interlace
