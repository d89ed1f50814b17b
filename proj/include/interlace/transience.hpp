#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "interlace/goodness.hpp"
#include "interlace/walk.hpp"

namespace interlace {

// Finite weighted family of paths sharing a root.
struct PathMeasure {
  std::vector<Path> paths;
  std::vector<double> weights;
};

struct EnergyReport {
  std::unordered_map<LatticePoint, double, LatticePointHash> mass;  // mu[x in pi]
  double energy = 0;                                                 // sum of mass^2
  double total_mass = 0;
  double max_mass = 0;
  std::size_t sites = 0;
};

// Vertex energy of a path measure. Throws ConfigError if weights are
// negative, misaligned, or do not sum to 1 within 1e-12.
EnergyReport energy(const PathMeasure& pm);

struct PushforwardReport {
  double original = 0;
  double lifted = 0;
  double factor = 0;  // 2^d * 7^2
  double ratio = 0;   // lifted / original
  bool holds = false; // lifted <= factor * original * (1 + 1e-9)
};

// Energy of pm and of its image under lift(., gf).
PushforwardReport pushforward_energy_check(const PathMeasure& pm, const GoodnessField& gf);

struct ResistanceCurve {
  std::vector<int> radii;
  std::vector<double> resistance;  // +inf where the center does not reach the shell
};

// Unit conductance on nearest-neighbor edges of the cluster. For each radius
// n: potential 1 at the center, 0 on cluster sites with |x - center|_inf = n,
// harmonic at the cluster sites strictly inside; R_eff = 1 / current.
// Solved by Jacobi-preconditioned CG to relative residual 1e-10.
ResistanceCurve effective_resistance(const SiteSet& cluster, const LatticePoint& center, std::span<const int> radii);

struct STReport {
  LatticePoint x;
  bool good = false;
  std::vector<LatticePoint> S;    // S(x)
  double sum_T = 0;               // sum over y in S(x) of |T(y)|
  // overlap_tail[r] = 1 if some z with |z - x|_inf >= r has S(z) n S(x) != {},
  // r = 0..max_radius.
  std::vector<char> overlap_tail;
  // A bad cluster involved touches the window edge, so S and T may be cut off.
  bool censored = false;
};

// Good sites of the window form the good cluster. S(x) = {x} for good x and
// the good sites star-adjacent to the bad star-cluster of x otherwise;
// T(y) = {x : y in S(x)}, empty for bad y.
STReport st_bookkeeping(const GoodnessField& gf, const LatticePoint& x);

}  // namespace interlace
