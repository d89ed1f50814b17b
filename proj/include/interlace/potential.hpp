#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>
#include <vector>

#include "interlace/green.hpp"
#include "interlace/lattice.hpp"

namespace interlace {

// e_K(x) = P_x[no return to K] on K; the total mass is cap(K).
struct EquilibriumMeasure {
  SiteSet support;
  std::vector<double> weights;  // aligned with support
  double capacity = 0;
  double max_residual = 0;

  double weight(const LatticePoint& x) const {
    const long i = support.index_of(x);
    return i < 0 ? 0.0 : weights[static_cast<std::size_t>(i)];
  }
};

// Dense Green system on the interior boundary of a finite set K. The matrix
// [g(b_i - b_j)] is symmetric positive definite; it is factored once and
// shared by the equilibrium solve and harmonic-measure solves.
class BoundarySolver {
 public:
  BoundarySolver(SiteSet K, const GreenTable& green);

  const SiteSet& set() const noexcept { return K_; }
  const std::vector<LatticePoint>& boundary() const noexcept { return boundary_; }
  const GreenTable& green() const noexcept { return *green_; }

  EquilibriumMeasure equilibrium() const;

  // a_b = P_z[H_K < inf, X_{H_K} = b] for each interior-boundary site b, z
  // outside K; from g(z, y) = sum_b a_b g(b, y) on the boundary.
  std::vector<double> entrance_distribution(const LatticePoint& z) const;

  // Rows of entrance distributions for several starting points.
  Eigen::MatrixXd entrance_matrix(std::span<const LatticePoint> starts) const;

 private:
  void require_coverage(const LatticePoint& z) const;

  SiteSet K_;
  std::vector<LatticePoint> boundary_;
  const GreenTable* green_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Solves sum_y g(x - y) e(y) = 1 on the interior boundary of K, verifies the
// residual on all of K (< 1e-8) and clamps negatives above -1e-10. Throws
// CoverageError if K does not fit the table, NumericError otherwise.
EquilibriumMeasure equilibrium_exact(const SiteSet& K, const GreenTable& green);

// h(z) = P_z[H_K < inf] = sum_y g(z - y) e_K(y); exactly 1 on K.
double hit_probability(const LatticePoint& z, const EquilibriumMeasure& e, const GreenTable& green);

struct CapacityScaling {
  std::vector<int> radii;
  std::vector<double> capacities;
  double exponent = 0;  // fitted slope of log cap vs log L
  double prefactor = 0;
  // Constants c with cap = (c L / sqrt d)^(d-2) per radius, for comparison
  // with two-sided bounds of that form.
  std::vector<double> implied_constants;
};

// Exact capacities of Euclidean balls B_2(0, L).
CapacityScaling capacity_ball_scaling(int d, std::span<const int> radii, const GreenTable& green);

}  // namespace interlace
