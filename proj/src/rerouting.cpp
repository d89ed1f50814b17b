#include "interlace/rerouting.hpp"

#include <deque>
#include <unordered_map>

#include "interlace/error.hpp"

namespace interlace {

namespace {

bool good_at(const GoodnessField& gf, const LatticePoint& y) { return gf.contains(y) && gf.is_good(y); }

}  // namespace

ExcursionDecomposition decompose(const Path& pi, const GoodnessField& gf) {
  ExcursionDecomposition out;
  bool in_bad = false;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const bool good = good_at(gf, pi[k]);
    if (!in_bad && !good) {
      out.departures.push_back(k);
      in_bad = true;
    } else if (in_bad && good) {
      out.returns.push_back(k);
      in_bad = false;
    }
  }
  return out;
}

Path shortest_path(const LatticePoint& from, const LatticePoint& to,
                   const std::function<bool(const LatticePoint&)>& allowed) {
  if (!allowed(from) || !allowed(to)) return {};
  if (from == to) return {from};
  // Distances to `to`, then a greedy walk taking the smallest neighbor one
  // step closer; this gives the lexicographically least shortest path.
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> dist;
  std::deque<LatticePoint> queue{to};
  dist.emplace(to, 0);
  bool reached = false;
  while (!queue.empty() && !reached) {
    const LatticePoint x = queue.front();
    queue.pop_front();
    const std::size_t dx = dist[x];
    for (const auto& y : neighbors(x, false)) {
      if (dist.count(y) || !allowed(y)) continue;
      dist.emplace(y, dx + 1);
      if (y == from) reached = true;
      queue.push_back(y);
    }
  }
  if (!reached) return {};
  Path p{from};
  LatticePoint x = from;
  while (!(x == to)) {
    const std::size_t want = dist.at(x) - 1;
    std::optional<LatticePoint> best;
    for (const auto& y : neighbors(x, false)) {
      auto it = dist.find(y);
      if (it != dist.end() && it->second == want && (!best || y < *best)) best = y;
    }
    x = *best;
    p.push_back(x);
  }
  return p;
}

Path reroute(const Path& pi, const GoodnessField& gf) {
  if (!is_nearest_neighbor_path(pi)) throw ConfigError("reroute expects a nearest-neighbor path");
  const auto dec = decompose(pi, gf);
  auto good = [&](const LatticePoint& y) { return good_at(gf, y); };
  Path out;
  std::size_t k = 0;
  std::size_t n = 0;
  if (!dec.empty() && dec.departures[0] == 0) {
    if (dec.returns.empty()) throw NoWitnessError("no reroute witness: the path never reaches a good site");
    k = dec.returns[0];
    n = 1;
  }
  for (; n < dec.departures.size(); ++n) {
    const std::size_t D = dec.departures[n];
    for (; k < D; ++k) out.push_back(pi[k]);
    if (n >= dec.returns.size()) {
      k = pi.size();  // the finite path ends inside this excursion
      break;
    }
    const std::size_t R = dec.returns[n];
    const Path bridge = shortest_path(pi[D - 1], pi[R], good);
    if (bridge.empty())
      throw NoWitnessError("no reroute witness between " + pi[D - 1].str() + " and " + pi[R].str());
    if (bridge.size() > 2) out.insert(out.end(), bridge.begin() + 1, bridge.end() - 1);
    k = R;
  }
  for (; k < pi.size(); ++k) out.push_back(pi[k]);
  return loop_erase(out);
}

Path lift(const Path& pi, const GoodnessField& gf) {
  if (pi.empty()) return {};
  if (!is_nearest_neighbor_path(pi)) throw ConfigError("lift expects a nearest-neighbor path");
  for (const auto& y : pi)
    if (!good_at(gf, y)) throw ConfigError("lift expects good sites only: " + y.str());
  const int d = gf.ambient_dim();
  const BitField& vacant = gf.vacant();
  const std::size_t cap = std::size_t{7} << d;

  Path out{gf.gamma(pi[0])};
  for (std::size_t k = 1; k < pi.size(); ++k) {
    const LatticePoint& y = pi[k - 1];
    const auto zs = cube_neighborhood(y);
    auto allowed = [&](const LatticePoint& x) {
      if (!vacant.window().contains(x) || !vacant.at(x)) return false;
      for (int i = 3; i < d; ++i)
        if (x[i] < 0 || x[i] > 1) return false;
      LatticePoint z(3);
      for (int a = 0; a < 3; ++a) z[a] = x[a] >= 0 ? x[a] / 2 : -((-x[a] + 1) / 2);
      for (const auto& c : zs)
        if (c == z) return true;
      return false;
    };
    const Path seg = shortest_path(out.back(), gf.gamma(pi[k]), allowed);
    if (seg.empty())
      throw NumericError("lift: no vacant connection from " + y.str() + " to " + pi[k].str() +
                         " inside the cube neighborhood");
    if (seg.size() > cap)
      throw NumericError("lift: segment of " + std::to_string(seg.size()) + " sites exceeds 7 * 2^d");
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return loop_erase(out);
}

}  // namespace interlace
