#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "interlace/lattice.hpp"
#include "interlace/rng.hpp"

namespace interlace {

using Path = std::vector<LatticePoint>;

bool is_nearest_neighbor_path(const Path& p);
bool is_simple(const Path& p);

// One uniform nearest-neighbor step.
inline LatticePoint random_step(const LatticePoint& x, Philox& rng) {
  const auto dir = rng.below(static_cast<std::uint32_t>(2 * x.dim()));
  LatticePoint y = x;
  y[static_cast<int>(dir >> 1)] += (dir & 1u) ? 1 : -1;
  return y;
}

enum class WalkStatus { stopped, exhausted };

struct WalkResult {
  Path path;
  WalkStatus status = WalkStatus::stopped;
};

// Simple random walk from x0 until `stop` holds (checked at time 0 as well)
// or max_steps steps have been taken.
WalkResult run_until(const LatticePoint& x0, const std::function<bool(const LatticePoint&)>& stop, Philox& rng,
                     std::uint64_t max_steps);

// Chronological loop-erasure.
Path loop_erase(const Path& p);

}  // namespace interlace
