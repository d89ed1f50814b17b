#include "interlace/transience.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "interlace/error.hpp"
#include "interlace/rerouting.hpp"
#include "interlace/vacancy.hpp"

namespace interlace {

EnergyReport energy(const PathMeasure& pm) {
  if (pm.paths.size() != pm.weights.size()) throw ConfigError("path measure: weights and paths differ in number");
  double total = 0;
  for (double w : pm.weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw ConfigError("path measure: weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("path measure: weights sum to " + std::to_string(total));
  EnergyReport rep;
  rep.total_mass = total;
  for (std::size_t i = 0; i < pm.paths.size(); ++i) {
    std::unordered_map<LatticePoint, char, LatticePointHash> seen;
    for (const auto& x : pm.paths[i]) {
      if (seen.emplace(x, 1).second) rep.mass[x] += pm.weights[i];
    }
  }
  for (const auto& [x, m] : rep.mass) {
    rep.energy += m * m;
    rep.max_mass = std::max(rep.max_mass, m);
  }
  rep.sites = rep.mass.size();
  return rep;
}

PushforwardReport pushforward_energy_check(const PathMeasure& pm, const GoodnessField& gf) {
  PathMeasure lifted;
  lifted.weights = pm.weights;
  lifted.paths.reserve(pm.paths.size());
  for (const auto& p : pm.paths) lifted.paths.push_back(lift(p, gf));
  PushforwardReport rep;
  rep.original = energy(pm).energy;
  rep.lifted = energy(lifted).energy;
  rep.factor = std::ldexp(49.0, gf.ambient_dim());
  rep.ratio = rep.original > 0 ? rep.lifted / rep.original : 0.0;
  rep.holds = rep.lifted <= rep.factor * rep.original * (1 + 1e-9);
  return rep;
}

ResistanceCurve effective_resistance(const SiteSet& cluster, const LatticePoint& center, std::span<const int> radii) {
  if (!cluster.contains(center)) throw ConfigError("resistance center is not in the cluster");
  ResistanceCurve curve;
  for (int n : radii) {
    if (n < 1) throw ConfigError("resistance radii must be positive");
    auto dist = [&](const LatticePoint& x) { return norm_linf(x - center); };

    // Unknowns: sites strictly inside B_inf(center, n) reachable from the center.
    std::unordered_map<LatticePoint, long, LatticePointHash> id;  // >= 0 unknown, -1 shell, -2 center
    std::vector<LatticePoint> unknowns;
    std::deque<LatticePoint> queue{center};
    id.emplace(center, -2);
    bool touches_shell = false;
    while (!queue.empty()) {
      const LatticePoint x = queue.front();
      queue.pop_front();
      for (const auto& y : neighbors(x, false)) {
        if (id.count(y) || !cluster.contains(y)) continue;
        const long dy = dist(y);
        if (dy > n) continue;
        if (dy == n) {
          id.emplace(y, -1);
          touches_shell = true;
          continue;
        }
        id.emplace(y, static_cast<long>(unknowns.size()));
        unknowns.push_back(y);
        queue.push_back(y);
      }
    }
    curve.radii.push_back(n);
    if (!touches_shell) {
      curve.resistance.push_back(std::numeric_limits<double>::infinity());
      continue;
    }

    const auto m = static_cast<Eigen::Index>(unknowns.size());
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(m);
    if (m > 0) {
      std::vector<Eigen::Triplet<double>> trip;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        double deg = 0;
        for (const auto& y : neighbors(unknowns[static_cast<std::size_t>(i)], false)) {
          auto it = id.find(y);
          if (it == id.end()) continue;  // outside the cluster or the ball
          deg += 1;
          if (it->second >= 0)
            trip.emplace_back(i, static_cast<Eigen::Index>(it->second), -1.0);
          else if (it->second == -2)
            rhs(i) += 1.0;
        }
        trip.emplace_back(i, i, deg);
      }
      Eigen::SparseMatrix<double> L(m, m);
      L.setFromTriplets(trip.begin(), trip.end());
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                               Eigen::DiagonalPreconditioner<double>>
          cg;
      cg.setTolerance(1e-10);
      cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * m));
      cg.compute(L);
      phi = cg.solve(rhs);
      if (cg.info() != Eigen::Success)
        throw NumericError("resistance solve did not converge (error " + std::to_string(cg.error()) + ")");
    }
    double current = 0;
    for (const auto& y : neighbors(center, false)) {
      auto it = id.find(y);
      if (it == id.end()) continue;
      current += 1.0 - (it->second >= 0 ? phi(static_cast<Eigen::Index>(it->second)) : 0.0);
    }
    curve.resistance.push_back(1.0 / current);
  }
  return curve;
}

STReport st_bookkeeping(const GoodnessField& gf, const LatticePoint& x) {
  const Window& w = gf.window();
  if (!w.contains(x)) throw CoverageError("st_bookkeeping: " + x.str() + " is outside the goodness window");
  const BitField bad = gf.good().complement();
  const auto lab = components(bad, Adjacency::star);
  const Stencil star = make_stencil(w, Adjacency::star);
  auto on_edge = [&](std::size_t i) {
    const LatticePoint p = w.site(i);
    for (int a = 0; a < w.dim(); ++a)
      if (p[a] == w.lo()[a] || p[a] == w.hi()[a]) return true;
    return false;
  };

  // Bad clusters star-adjacent to a good site.
  auto adjacent_clusters = [&](std::size_t i) {
    std::set<std::int64_t> out;
    for_each_neighbor(w, star, i, [&](std::size_t j) {
      if (lab.label[j] >= 0) out.insert(lab.label[j]);
    });
    return out;
  };
  auto T_size = [&](std::size_t i) {
    double t = 1;
    for (auto c : adjacent_clusters(i)) t += static_cast<double>(lab.sizes[static_cast<std::size_t>(c)]);
    return t;
  };

  STReport rep;
  rep.x = x;
  const std::size_t xi = w.index(x);
  rep.good = gf.good().test(xi);
  std::vector<std::size_t> S;
  if (rep.good) {
    S.push_back(xi);
  } else {
    const auto c = lab.label[xi];
    std::vector<char> in_S(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (lab.label[i] != c) continue;
      if (on_edge(i)) rep.censored = true;
      for_each_neighbor(w, star, i, [&](std::size_t j) {
        if (lab.label[j] < 0 && !in_S[j]) {
          in_S[j] = 1;
          S.push_back(j);
        }
      });
    }
    std::sort(S.begin(), S.end());
  }

  long reach = 0;
  std::set<std::int64_t> touched;  // clusters whose sites form the T(y), y in S
  for (std::size_t i : S) {
    rep.S.push_back(w.site(i));
    rep.sum_T += T_size(i);
    if (on_edge(i)) rep.censored = true;
    reach = std::max(reach, norm_linf(w.site(i) - x));
    const auto cs = adjacent_clusters(i);
    touched.insert(cs.begin(), cs.end());
  }
  if (!touched.empty()) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (lab.label[j] >= 0 && touched.count(lab.label[j])) {
        reach = std::max(reach, norm_linf(w.site(j) - x));
        if (on_edge(j)) rep.censored = true;
      }
    }
  }
  long max_radius = 0;
  for (int a = 0; a < w.dim(); ++a) max_radius = std::max<long>({max_radius, x[a] - w.lo()[a], w.hi()[a] - x[a]});
  rep.overlap_tail.assign(static_cast<std::size_t>(max_radius + 1), 0);
  for (long r = 0; r <= std::min(reach, max_radius); ++r) rep.overlap_tail[static_cast<std::size_t>(r)] = 1;
  return rep;
}

}  // namespace interlace
