#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "interlace/lattice.hpp"

namespace interlace {

inline constexpr double kDefaultGreenTolerance = 1e-8;

// Green function of simple random walk on Z^d (expected visits to x from 0),
// d >= 3, by adaptive quadrature. The lattice Fourier integral
//   (2 pi)^-d \int cos(x.theta) / (1 - d^-1 sum cos theta_j) dtheta
// is evaluated in its equivalent one-dimensional form
//   d \int_0^inf prod_j e^-s I_{x_j}(s) ds,
// obtained by integrating out theta under the Laplace representation of the
// denominator. Throws NumericError if the absolute tolerance is not reached.
double green_value(int d, const LatticePoint& x, double tolerance = kDefaultGreenTolerance);

// Leading-order asymptotics C_d r^(2-d), C_d = (d/2) Gamma(d/2 - 1) pi^(-d/2).
double green_asymptotic(int d, double r);
double green_constant(int d);

enum class GreenMethod : std::uint8_t { quadrature = 0, dirichlet_solve = 1 };

// Immutable table of g(x) for |x|_inf <= radius. Values are stored on the
// nonnegative orthant and looked up through |x_i|.
class GreenTable {
 public:
  GreenTable() = default;
  GreenTable(int d, int radius, GreenMethod method, double tolerance, std::vector<double> orthant);

  int dim() const noexcept { return d_; }
  int radius() const noexcept { return radius_; }
  GreenMethod method() const noexcept { return method_; }
  double tolerance() const noexcept { return tolerance_; }

  bool covers(const LatticePoint& x) const noexcept { return norm_linf(x) <= radius_; }

  // Throws CoverageError naming x if it is outside the table.
  double operator()(const LatticePoint& x) const;

  double unchecked(const LatticePoint& x) const noexcept {
    std::size_t idx = 0;
    for (int i = 0; i < d_; ++i) idx = idx * side_ + static_cast<std::size_t>(x[i] < 0 ? -x[i] : x[i]);
    return orthant_[idx];
  }

  // One representative per symmetry class: coordinates sorted nonincreasing, >= 0.
  std::vector<std::pair<LatticePoint, double>> classes() const;

  const std::vector<double>& orthant() const noexcept { return orthant_; }

  friend bool operator==(const GreenTable& a, const GreenTable& b) = default;

 private:
  int d_ = 0;
  int radius_ = 0;
  GreenMethod method_ = GreenMethod::quadrature;
  double tolerance_ = 0;
  std::size_t side_ = 0;
  std::vector<double> orthant_;
};

struct GreenBuildOptions {
  double tolerance = 1e-10;
  // Dirichlet solve: box radius (0 selects max(3 * radius, 32)) and CG tolerance.
  int solve_radius = 0;
  double solve_tolerance = 1e-13;
  // Dirichlet solve: number of entries cross-checked against quadrature.
  int cross_checks = 10;
  double cross_check_relative = 1e-4;
  std::uint64_t seed = 0x5EED;
};

// method = quadrature fills every symmetry class by green_value.
// method = dirichlet_solve solves (I - P) g = delta_0 on a box with boundary
// values from green_asymptotic, then cross-validates random entries against
// quadrature; a failed cross-check throws NumericError.
GreenTable build_green_table(int d, int radius, GreenMethod method, const GreenBuildOptions& options = {});

// GRNT cache file (little-endian):
//   "GRNT" u32 version u32 d u32 radius u8 method f64 tolerance u64 count
//   count x (i32[d] vector, f64 value)   -- one record per symmetry class
//   u32 crc32 of everything before it
void save_green_table(const GreenTable& table, const std::filesystem::path& path);
GreenTable load_green_table(const std::filesystem::path& path);

// Loads `path` if it holds a compatible table (same d, radius >= requested,
// same method), otherwise builds one and writes it to `path`.
GreenTable load_or_build_green_table(const std::filesystem::path& path, int d, int radius, GreenMethod method,
                                     const GreenBuildOptions& options = {});

}  // namespace interlace
