#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "interlace/goodness.hpp"
#include "interlace/walk.hpp"

namespace interlace {

// Departures from and returns to the good set along a finite path:
// D_0 = first bad index, R_n = first good index after D_n, D_{n+1} = first
// bad index after R_n. returns.size() is departures.size() or one less when
// the path ends inside a bad excursion.
struct ExcursionDecomposition {
  std::vector<std::size_t> departures;
  std::vector<std::size_t> returns;

  bool empty() const noexcept { return departures.empty(); }
};

// Treats every good site of the window as part of the good cluster; sites
// outside the window count as bad.
ExcursionDecomposition decompose(const Path& pi, const GoodnessField& gf);

// Shortest nearest-neighbor path from `from` to `to` through sites accepted
// by `allowed` (endpoints included), lexicographically smallest among the
// shortest ones. Empty if none exists. `allowed` must reject all but finitely
// many sites.
Path shortest_path(const LatticePoint& from, const LatticePoint& to,
                   const std::function<bool(const LatticePoint&)>& allowed);

// Erases a leading bad segment, replaces each bad excursion by a shortest
// path in the good set joining its good endpoints, drops a trailing bad
// segment the finite path never returns from, and loop-erases. Throws
// NoWitnessError when an excursion's endpoints are not joined inside the
// window's good set or a leading bad segment has no return.
Path reroute(const Path& pi, const GoodnessField& gf);

// Maps a nearest-neighbor path of good Z^3 sites to a simple vacant path in
// Z^d: y -> Gamma(y), consecutive images joined by shortest vacant paths in
// the union of the 7 cubes around the earlier site, then loop-erased.
// Throws NumericError if a segment cannot be built or exceeds 7 * 2^d sites.
Path lift(const Path& pi, const GoodnessField& gf);

}  // namespace interlace
