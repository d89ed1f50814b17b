#include <deque>
#include <map>
#include <memory>
#include <set>

#include "doctest.h"
#include "interlace/error.hpp"
#include "interlace/goodness.hpp"
#include "interlace/sampler.hpp"
#include "support.hpp"

using namespace interlace;

namespace {

// Goodness by direct search over lattice points: components of each cube,
// their closures, and connected components of the vacant union of cubes.
struct Oracle {
  bool good = false;
  LatticePoint gamma;
};

Oracle oracle_classify(const LatticePoint& y, const BitField& vacant) {
  const int d = vacant.window().dim();
  const auto zs = cube_neighborhood(y);
  auto vac = [&](const LatticePoint& x) { return vacant.at(x); };
  std::set<LatticePoint> uni;
  std::vector<std::set<LatticePoint>> cube_sets;
  for (const auto& z : zs) {
    const auto c = hypercube(z, d);
    cube_sets.emplace_back(c.begin(), c.end());
    for (const auto& x : c)
      if (vac(x)) uni.insert(x);
  }
  // Qualifying components per cube, each as a sorted site set.
  std::vector<std::vector<std::set<LatticePoint>>> qual(kCubeCount);
  for (int k = 0; k < kCubeCount; ++k) {
    const auto& C = cube_sets[static_cast<std::size_t>(k)];
    std::set<LatticePoint> seen;
    for (const auto& s : C) {
      if (!vac(s) || seen.count(s)) continue;
      std::set<LatticePoint> comp{s};
      std::deque<LatticePoint> q{s};
      seen.insert(s);
      while (!q.empty()) {
        const auto x = q.front();
        q.pop_front();
        for (const auto& n : neighbors(x, false))
          if (C.count(n) && vac(n) && !seen.count(n)) {
            seen.insert(n);
            comp.insert(n);
            q.push_back(n);
          }
      }
      std::set<LatticePoint> closure = comp;
      for (const auto& x : comp)
        for (const auto& n : neighbors(x, false)) closure.insert(n);
      std::size_t inside = 0;
      for (const auto& x : closure) inside += C.count(x);
      const double need = (1.0 - 1.0 / (d * d)) * double(1 << d);
      if (double(inside) >= need - 1e-9) qual[static_cast<std::size_t>(k)].push_back(comp);
    }
  }
  // Connected components of the vacant union.
  std::map<LatticePoint, int> part;
  int parts = 0;
  for (const auto& s : uni) {
    if (part.count(s)) continue;
    std::deque<LatticePoint> q{s};
    part[s] = parts;
    while (!q.empty()) {
      const auto x = q.front();
      q.pop_front();
      for (const auto& n : neighbors(x, false))
        if (uni.count(n) && !part.count(n)) {
          part[n] = parts;
          q.push_back(n);
        }
    }
    ++parts;
  }
  Oracle o;
  for (const auto& center : qual[0]) {  // already in order of smallest site
    const int p = part.at(*center.begin());
    bool all = true;
    for (int k = 1; k < kCubeCount && all; ++k) {
      bool found = false;
      for (const auto& c : qual[static_cast<std::size_t>(k)]) found = found || part.at(*c.begin()) == p;
      all = found;
    }
    if (all) {
      o.good = true;
      o.gamma = *center.begin();
      return o;
    }
  }
  return o;
}

BitField random_field(const Window& w, double p, Philox& rng) {
  BitField f(w, false);
  for (std::size_t i = 0; i < w.size(); ++i) f.set(i, rng.uniform() < p);
  return f;
}

}  // namespace

TEST_CASE("thresholds") {
  CHECK(closure_qualifies(15, 4));
  CHECK(!closure_qualifies(14, 4));
  CHECK(closure_qualifies(8, 3));
  CHECK(!closure_qualifies(7, 3));
  CHECK(closure_qualifies(31, 5));  // 24/25 * 32 = 30.72
  CHECK(!closure_qualifies(30, 5));
  CHECK(ball_l1(LatticePoint(3), 1).size() == std::size_t{kCubeCount});
  const auto zs = cube_neighborhood(LatticePoint{1, 2, 3});
  CHECK(zs[0] == LatticePoint{1, 2, 3});
  CHECK(zs[2] == LatticePoint{2, 2, 3});
}

TEST_CASE("cube components") {
  std::vector<char> all(16, 1), none(16, 0);
  CHECK(uniqueness_check(all, 4) == 1);
  CHECK(uniqueness_check(none, 4) == 0);
  const auto c = cube_components(all, 4);
  CHECK(c.anchor == std::vector<std::uint32_t>{0});
  CHECK(c.closure == std::vector<std::uint32_t>{16});
  // Two antipodal corners in d=3: separate components, closure 4 each.
  std::vector<char> two(8, 0);
  two[0] = two[7] = 1;
  const auto t = cube_components(two, 3);
  CHECK(t.anchor == std::vector<std::uint32_t>{0, 7});
  CHECK(t.closure == std::vector<std::uint32_t>{4, 4});
}

TEST_CASE("uniqueness multiplicity at d = 7") {
  Philox rng(13, 0);
  std::map<std::size_t, int> hist;
  std::vector<char> v(128);
  for (int k = 0; k < 10000; ++k) {
    for (auto& b : v) b = rng.uniform() < 0.5;
    ++hist[uniqueness_check(v, 7)];
  }
  for (const auto& [count, n] : hist) MESSAGE("qualifying components " << count << ": " << n);
  int total = 0;
  for (const auto& [count, n] : hist) total += n;
  CHECK(total == 10000);
}

TEST_CASE("fully vacant and fully occupied") {
  for (int d : {3, 4, 5}) {
    const auto w = Window::slab(d, 2);
    const GoodnessField gv(std::make_shared<const BitField>(w, true), 0.0, 1);
    CHECK(gv.window() == Window(LatticePoint{-1, -1, -1}, LatticePoint{1, 1, 1}));
    CHECK(gv.good().count() == gv.window().size());
    for (std::size_t i = 0; i < gv.window().size(); ++i) {
      const auto y = gv.window().site(i);
      CHECK(gv.gamma(y) == embed(y, d).scaled(2));
    }
    CHECK(bad_clusters(gv).empty());
    const GoodnessField go(std::make_shared<const BitField>(w, false), 1.0, 1);
    CHECK(go.good().count() == 0);
    CHECK_THROWS_AS(go.gamma(LatticePoint(3)), ConfigError);
    const auto st = bad_clusters(go);
    CHECK(st.max_size == 27);
    CHECK(st.tail.front() == 1.0);
  }
}

TEST_CASE("classify agrees with the brute-force oracle") {
  Philox rng(14, 0);
  int good = 0, bad = 0;
  for (int d : {3, 4, 5}) {
    const auto w = Window::slab(d, 2);
    for (int trial = 0; trial < 12; ++trial) {
      const double p = d == 3 ? 0.9 + 0.01 * trial : 0.55 + 0.04 * trial;
      const auto vacant = std::make_shared<const BitField>(random_field(w, p, rng));
      const GoodnessField gf(vacant, 0.0, 1);
      for (std::size_t i = 0; i < gf.window().size(); ++i) {
        const auto y = gf.window().site(i);
        const auto o = oracle_classify(y, *vacant);
        CHECK(gf.is_good(y) == o.good);
        if (o.good) {
          CHECK(gf.gamma(y) == o.gamma);
          ++good;
        } else {
          ++bad;
        }
        const auto wit = classify(y, *vacant);
        CHECK(wit.good == o.good);
        if (o.good) CHECK(wit.gamma == o.gamma);
      }
    }
  }
  MESSAGE("good " << good << ", bad " << bad);
  CHECK(good > 50);
  CHECK(bad > 50);
}

TEST_CASE("window coverage") {
  const auto w = Window::slab(4, 2);
  const BitField v(w, true);
  CHECK_THROWS_AS(classify(LatticePoint{2, 0, 0}, v), CoverageError);
  CHECK_THROWS_AS(goodness_window(Window::slab(4, 0)), CoverageError);
  CHECK(goodness_window(Window::slab(3, 4)) == Window(LatticePoint{-3, -3, -3}, LatticePoint{3, 3, 3}));
}

TEST_CASE("locality fuzz") {
  Philox rng(15, 0);
  int changes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 3 + static_cast<int>(rng.below(3));
    const auto w = Window::slab(d, 2);
    BitField v = random_field(w, d == 3 ? 0.93 : 0.7, rng);
    const auto gw = goodness_window(w);
    const auto y = gw.site(rng.below(static_cast<std::uint32_t>(gw.size())));
    const auto before = classify(y, v);
    std::set<LatticePoint> local;
    for (const auto& z : cube_neighborhood(y))
      for (const auto& x : hypercube(z, d)) local.insert(x);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!local.count(w.site(i)) && rng.uniform() < 0.5) v.set(i, !v.test(i));
    const auto after = classify(y, v);
    changes += before.good != after.good || before.anchor != after.anchor;
  }
  CHECK(changes == 0);
}

TEST_CASE("goodness is monotone under thinning") {
  const auto& g = testing::green(3, 16);
  const InterlacementSampler s(Window::slab(3, 2), g, SamplerMode::exact());
  const std::vector<double> grid{0.0, 0.05, 0.1, 0.2, 0.4};
  int violations = 0;
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto smp = s.sample(grid.back(), 17, r);
    BitField prev;
    for (double u : grid) {
      const GoodnessField gf(std::make_shared<const BitField>(occupancy_of(smp, u).complement()), u, 1);
      if (u == 0.0) CHECK(gf.good().count() == gf.window().size());
      if (prev.size() > 0) violations += !gf.good().is_subset_of(prev);
      prev = gf.good();
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("bad cluster tail") {
  Philox rng(16, 0);
  const auto w = Window::slab(4, 3);
  const GoodnessField gf(std::make_shared<const BitField>(random_field(w, 0.8, rng)), 0.0, 2);
  const auto st = bad_clusters(gf);
  REQUIRE(!st.empty());
  for (std::size_t N = 1; N < st.tail.size(); ++N) CHECK(st.tail[N] <= st.tail[N - 1]);
  std::size_t bad_sites = 0;
  for (auto s : st.sizes) bad_sites += s;
  CHECK(bad_sites == gf.window().size() - gf.good().count());
  CHECK(st.tail[0] == doctest::Approx(double(bad_sites) / double(st.sites)));
}
