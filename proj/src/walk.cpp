#include "interlace/walk.hpp"

#include <unordered_map>
#include <unordered_set>

#include "interlace/error.hpp"

namespace interlace {

bool is_nearest_neighbor_path(const Path& p) {
  for (std::size_t i = 1; i < p.size(); ++i)
    if (norm_l1(p[i] - p[i - 1]) != 1) return false;
  return true;
}

bool is_simple(const Path& p) {
  std::unordered_set<LatticePoint, LatticePointHash> seen;
  seen.reserve(p.size());
  for (const auto& x : p)
    if (!seen.insert(x).second) return false;
  return true;
}

WalkResult run_until(const LatticePoint& x0, const std::function<bool(const LatticePoint&)>& stop, Philox& rng,
                     std::uint64_t max_steps) {
  if (max_steps == 0) throw ConfigError("run_until: max_steps must be positive");
  WalkResult out;
  out.path.push_back(x0);
  LatticePoint x = x0;
  for (std::uint64_t step = 0; !stop(x); ++step) {
    if (step == max_steps) {
      out.status = WalkStatus::exhausted;
      return out;
    }
    x = random_step(x, rng);
    out.path.push_back(x);
  }
  out.status = WalkStatus::stopped;
  return out;
}

Path loop_erase(const Path& p) {
  Path out;
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> position;
  for (const auto& x : p) {
    auto it = position.find(x);
    if (it == position.end()) {
      position.emplace(x, out.size());
      out.push_back(x);
      continue;
    }
    // Revisit: drop the loop closed at x.
    for (std::size_t k = it->second + 1; k < out.size(); ++k) position.erase(out[k]);
    out.resize(it->second + 1);
  }
  return out;
}

}  // namespace interlace
