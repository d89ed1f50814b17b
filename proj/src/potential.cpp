#include "interlace/potential.hpp"

#include <cmath>
#include <sstream>

#include "interlace/error.hpp"
#include "interlace/stats.hpp"

namespace interlace {

namespace {

constexpr double kResidualTolerance = 1e-8;
constexpr double kNegativeTolerance = 1e-10;

// Difference vector realizing the largest extent of the bounding box of K
// (plus optional extra point).
LatticePoint widest_difference(const SiteSet& K, const LatticePoint* extra) {
  const int d = K.dim();
  LatticePoint lo = K[0], hi = K[0];
  auto grow = [&](const LatticePoint& x) {
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  };
  for (const auto& x : K) grow(x);
  if (extra) grow(*extra);
  return hi - lo;
}

}  // namespace

BoundarySolver::BoundarySolver(SiteSet K, const GreenTable& green) : K_(std::move(K)), green_(&green) {
  if (K_.empty()) throw ConfigError("equilibrium measure of an empty set");
  if (K_.dim() != green.dim()) throw ConfigError("set and Green table have different dimensions");
  const LatticePoint span = widest_difference(K_, nullptr);
  if (!green.covers(span)) {
    throw CoverageError("Green table (radius " + std::to_string(green.radius()) +
                        ") does not cover difference vector " + span.str());
  }
  boundary_ = interlace::boundary(K_, BoundaryKind::interior).sites();
  const auto n = static_cast<Eigen::Index>(boundary_.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      m(i, j) = m(j, i) = green.unchecked(boundary_[static_cast<std::size_t>(i)] - boundary_[static_cast<std::size_t>(j)]);
  llt_.compute(m);
  if (llt_.info() != Eigen::Success) throw NumericError("Green matrix on the boundary is not positive definite");
}

void BoundarySolver::require_coverage(const LatticePoint& z) const {
  const LatticePoint span = widest_difference(K_, &z);
  if (!green_->covers(span)) {
    throw CoverageError("Green table (radius " + std::to_string(green_->radius()) +
                        ") does not cover difference vector " + span.str());
  }
}

EquilibriumMeasure BoundarySolver::equilibrium() const {
  const auto n = static_cast<Eigen::Index>(boundary_.size());
  const Eigen::VectorXd sol = llt_.solve(Eigen::VectorXd::Ones(n));
  EquilibriumMeasure e;
  e.support = K_;
  e.weights.assign(K_.size(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double w = sol(i);
    if (!std::isfinite(w)) throw NumericError("equilibrium solve produced a non-finite weight");
    if (w < -kNegativeTolerance) {
      std::ostringstream os;
      os << "equilibrium weight " << w << " at " << boundary_[static_cast<std::size_t>(i)].str() << " is negative";
      throw NumericError(os.str());
    }
    w = std::max(w, 0.0);
    e.weights[static_cast<std::size_t>(K_.index_of(boundary_[static_cast<std::size_t>(i)]))] = w;
  }
  for (double w : e.weights) e.capacity += w;

  double worst = 0;
  for (const auto& x : K_) {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) s += green_->unchecked(x - boundary_[static_cast<std::size_t>(i)]) * sol(i);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  e.max_residual = worst;
  if (worst >= kResidualTolerance) {
    std::ostringstream os;
    os << "equilibrium residual " << worst << " exceeds " << kResidualTolerance;
    throw NumericError(os.str());
  }
  return e;
}

std::vector<double> BoundarySolver::entrance_distribution(const LatticePoint& z) const {
  const std::array<LatticePoint, 1> one{z};
  const Eigen::MatrixXd m = entrance_matrix(one);
  return std::vector<double>(m.data(), m.data() + m.size());
}

Eigen::MatrixXd BoundarySolver::entrance_matrix(std::span<const LatticePoint> starts) const {
  const auto n = static_cast<Eigen::Index>(boundary_.size());
  const auto m = static_cast<Eigen::Index>(starts.size());
  Eigen::MatrixXd rhs(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& z = starts[static_cast<std::size_t>(j)];
    if (K_.contains(z)) throw ConfigError("entrance distribution requested from a point of K: " + z.str());
    require_coverage(z);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i, j) = green_->unchecked(z - boundary_[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd sol = llt_.solve(rhs);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double& a = sol(i, j);
      if (!std::isfinite(a) || a < -kResidualTolerance) {
        std::ostringstream os;
        os << "harmonic measure entry " << a << " from " << starts[static_cast<std::size_t>(j)].str() << " is invalid";
        throw NumericError(os.str());
      }
      a = std::max(a, 0.0);
    }
  }
  // Row-major: one row per starting point.
  return sol.transpose();
}

EquilibriumMeasure equilibrium_exact(const SiteSet& K, const GreenTable& green) {
  return BoundarySolver(K, green).equilibrium();
}

double hit_probability(const LatticePoint& z, const EquilibriumMeasure& e, const GreenTable& green) {
  if (e.support.contains(z)) return 1.0;
  double h = 0;
  for (std::size_t i = 0; i < e.support.size(); ++i) {
    if (e.weights[i] == 0.0) continue;
    h += green(z - e.support[i]) * e.weights[i];
  }
  return h;
}

CapacityScaling capacity_ball_scaling(int d, std::span<const int> radii, const GreenTable& green) {
  CapacityScaling out;
  std::vector<double> lx, ly;
  for (int L : radii) {
    const auto e = equilibrium_exact(ball_l2(LatticePoint(d), L), green);
    out.radii.push_back(L);
    out.capacities.push_back(e.capacity);
    out.implied_constants.push_back(std::pow(e.capacity, 1.0 / (d - 2)) * std::sqrt(double(d)) / L);
    lx.push_back(std::log(double(L)));
    ly.push_back(std::log(e.capacity));
  }
  if (lx.size() >= 2) {
    const auto fit = linear_fit(lx, ly);
    out.exponent = fit.slope;
    out.prefactor = std::exp(fit.intercept);
  }
  return out;
}

}  // namespace interlace
