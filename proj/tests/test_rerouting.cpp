#include <functional>
#include <memory>
#include <optional>
#include <set>

#include "doctest.h"
#include "interlace/error.hpp"
#include "interlace/rerouting.hpp"
#include "interlace/vacancy.hpp"

using namespace interlace;

namespace {

BitField random_field(const Window& w, double p, Philox& rng) {
  BitField f(w, false);
  for (std::size_t i = 0; i < w.size(); ++i) f.set(i, rng.uniform() < p);
  return f;
}

// Goodness field over a fully vacant slab with the given bad sites.
GoodnessField with_bad_sites(int d, int n, const std::vector<LatticePoint>& bad) {
  auto vacant = std::make_shared<const BitField>(Window::slab(d, n), true);
  const GoodnessField all(vacant, 0.0, 1);
  BitField good = all.good();
  for (const auto& y : bad) good.set(good.window().index(y), false);
  return GoodnessField(vacant, 0.0, good, all.anchors());
}

// Lexicographically least among all shortest paths, by exhaustive search.
Path brute_shortest(const LatticePoint& a, const LatticePoint& b, const std::function<bool(const LatticePoint&)>& ok,
                    std::size_t max_len) {
  std::optional<Path> best;
  Path cur{a};
  std::function<void()> dfs = [&] {
    if (best && cur.size() > best->size()) return;
    if (cur.back() == b) {
      if (!best || cur.size() < best->size() || cur < *best) best = cur;
      return;
    }
    if (cur.size() >= max_len) return;
    for (const auto& y : neighbors(cur.back(), false)) {
      if (!ok(y) || std::find(cur.begin(), cur.end(), y) != cur.end()) continue;
      cur.push_back(y);
      dfs();
      cur.pop_back();
    }
  };
  dfs();
  return best.value_or(Path{});
}

Path random_walk_in(const Window& w, std::size_t steps, Philox& rng) {
  Path p{w.site(rng.below(static_cast<std::uint32_t>(w.size())))};
  while (p.size() < steps) {
    const auto y = random_step(p.back(), rng);
    if (w.contains(y)) p.push_back(y);
  }
  return p;
}

}  // namespace

TEST_CASE("decomposition examples") {
  const auto gf = with_bad_sites(3, 3, {LatticePoint{1, 0, 0}, LatticePoint{2, 0, 0}});
  const Path good_path{LatticePoint{0, 1, 0}, LatticePoint{0, 0, 0}, LatticePoint{-1, 0, 0}};
  CHECK(decompose(good_path, gf).empty());
  const Path p{LatticePoint{-1, 0, 0}, LatticePoint{0, 0, 0}, LatticePoint{1, 0, 0}, LatticePoint{2, 0, 0},
               LatticePoint{2, 1, 0}};
  const auto dec = decompose(p, gf);
  CHECK(dec.departures == std::vector<std::size_t>{2});
  CHECK(dec.returns == std::vector<std::size_t>{4});
  const Path all_bad{LatticePoint{1, 0, 0}, LatticePoint{2, 0, 0}};
  const auto d2 = decompose(all_bad, gf);
  CHECK(d2.departures == std::vector<std::size_t>{0});
  CHECK(d2.returns.empty());
  CHECK_THROWS_AS(reroute(all_bad, gf), NoWitnessError);
}

TEST_CASE("reroute leaves good simple paths alone") {
  const auto gf = with_bad_sites(3, 3, {});
  const Path p{LatticePoint{0, 0, 0}, LatticePoint{1, 0, 0}, LatticePoint{1, 1, 0}, LatticePoint{1, 1, 1}};
  CHECK(reroute(p, gf) == p);
}

TEST_CASE("single bad site detour matches brute force") {
  const LatticePoint x{0, 0, 0};
  const auto gf = with_bad_sites(3, 3, {x});
  auto good = [&](const LatticePoint& y) { return gf.contains(y) && gf.is_good(y); };
  const std::size_t ext = boundary(SiteSet({x}), BoundaryKind::exterior_star).size();
  for (int axis = 0; axis < 3; ++axis) {
    const auto e = LatticePoint::unit(3, axis);
    const Path p{x - e - e, x - e, x, x + e, x + e + e};
    const Path out = reroute(p, gf);
    const Path bridge = brute_shortest(x - e, x + e, good, 8);
    Path expect{x - e - e};
    expect.insert(expect.end(), bridge.begin(), bridge.end());
    expect.push_back(x + e + e);
    CHECK(out == expect);
    CHECK(out.size() <= p.size() + ext);
  }
}

TEST_CASE("shortest_path is the lexicographically least shortest path") {
  Philox rng(21, 0);
  const Window w(LatticePoint{0, 0, 0}, LatticePoint{3, 3, 2});
  for (int trial = 0; trial < 60; ++trial) {
    const auto f = random_field(w, 0.75, rng);
    auto ok = [&](const LatticePoint& y) { return w.contains(y) && f.at(y); };
    const auto a = w.site(rng.below(static_cast<std::uint32_t>(w.size())));
    const auto b = w.site(rng.below(static_cast<std::uint32_t>(w.size())));
    const Path fast = shortest_path(a, b, ok);
    if (!ok(a) || !ok(b)) {
      CHECK(fast.empty());
      continue;
    }
    const Path brute = brute_shortest(a, b, ok, fast.empty() ? 12 : fast.size());
    if (fast.empty()) {
      CHECK(brute.empty());
      continue;
    }
    CHECK(fast == brute);
  }
}

TEST_CASE("randomized reroute postconditions") {
  Philox rng(22, 0);
  int done = 0, detoured = 0, no_witness = 0, violations = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int d = 3 + static_cast<int>(rng.below(2));
    const auto w = Window::slab(d, 4);
    const auto vacant = std::make_shared<const BitField>(random_field(w, (d == 3 ? 0.88 : 0.78) + 0.07 * rng.uniform(), rng));
    const GoodnessField gf(vacant, 0.0, 1);
    const Path pi = random_walk_in(gf.window(), 5 + rng.below(60), rng);
    Path out;
    try {
      out = reroute(pi, gf);
    } catch (const NoWitnessError&) {
      ++no_witness;
      continue;
    }
    ++done;
    detoured += !decompose(pi, gf).empty();
    bool ok = is_simple(out) && is_nearest_neighbor_path(out) && !out.empty();
    for (const auto& y : out) ok = ok && gf.is_good(y);
    const auto dec = decompose(pi, gf);
    const std::size_t first_good = (!dec.empty() && dec.departures[0] == 0) ? dec.returns[0] : 0;
    ok = ok && out.front() == pi[first_good];
    if (gf.is_good(pi.back())) ok = ok && out.back() == pi.back();
    violations += !ok;
  }
  MESSAGE("rerouted " << done << ", no witness " << no_witness);
  CHECK(done > 200);
  CHECK(detoured > 50);
  CHECK(violations == 0);
}

TEST_CASE("exterior star boundary of bad clusters") {
  Philox rng(23, 0);
  int clusters = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 3 + trial % 2;
    const auto w = Window::slab(d, 7);
    const GoodnessField gf(std::make_shared<const BitField>(random_field(w, d == 3 ? 0.92 : 0.8, rng)), 0.0, 1);
    const auto lab = components(gf.good().complement(), Adjacency::star);
    const Window& gw = gf.window();
    std::vector<std::vector<LatticePoint>> members(lab.count());
    for (std::size_t i = 0; i < gw.size(); ++i)
      if (lab.label[i] >= 0) members[static_cast<std::size_t>(lab.label[i])].push_back(gw.site(i));
    for (const auto& m : members) {
      bool interior = true;
      for (const auto& y : m)
        for (int a = 0; a < 3; ++a) interior = interior && y[a] > gw.lo()[a] && y[a] < gw.hi()[a];
      if (!interior) continue;
      ++clusters;
      const auto ext = boundary(SiteSet(m), BoundaryKind::exterior_star);
      CHECK(is_connected(ext, true));
      for (const auto& y : ext) CHECK(gf.is_good(y));
    }
  }
  CHECK(clusters > 10);
}

TEST_CASE("lift on a fully vacant field") {
  const auto gf = with_bad_sites(3, 3, {});
  const LatticePoint y{1, -1, 2};
  CHECK(lift({y}, gf) == Path{LatticePoint{2, -2, 4}});
  const Path pi{LatticePoint{0, 0, 0}, LatticePoint{1, 0, 0}, LatticePoint{1, 1, 0}};
  const Path out = lift(pi, gf);
  CHECK(out.front() == LatticePoint{0, 0, 0});
  CHECK(out.back() == LatticePoint{2, 2, 0});
  CHECK(out.size() == 5);
  CHECK(is_simple(out));
}

TEST_CASE("lift on random good configurations") {
  Philox rng(24, 0);
  int lifted = 0, violations = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 3 + static_cast<int>(rng.below(3));
    const auto w = Window::slab(d, 4);
    const auto vacant = std::make_shared<const BitField>(random_field(w, d == 3 ? 0.9 : 0.8, rng));
    const GoodnessField gf(vacant, 0.0, 1);
    // A random walk on good sites.
    std::vector<LatticePoint> goods;
    for (std::size_t i = 0; i < gf.window().size(); ++i)
      if (gf.good().test(i)) goods.push_back(gf.window().site(i));
    if (goods.empty()) continue;
    Path pi{goods[rng.below(static_cast<std::uint32_t>(goods.size()))]};
    for (int k = 0; k < 40; ++k) {
      const auto y = random_step(pi.back(), rng);
      if (gf.contains(y) && gf.is_good(y)) pi.push_back(y);
    }
    const Path out = lift(pi, gf);
    ++lifted;
    bool ok = is_simple(out) && is_nearest_neighbor_path(out);
    for (const auto& x : out) ok = ok && vacant->at(x);
    ok = ok && out.front() == gf.gamma(pi.front()) && out.back() == gf.gamma(pi.back());
    violations += !ok;
  }
  CHECK(lifted > 200);
  CHECK(violations == 0);
  CHECK_THROWS_AS(lift({LatticePoint{9, 9, 9}}, with_bad_sites(3, 3, {})), ConfigError);
}
