#include <cmath>
#include <map>
#include <memory>

#include "doctest.h"
#include "interlace/error.hpp"
#include "interlace/stats.hpp"
#include "interlace/transience.hpp"

using namespace interlace;

namespace {

Path straight(const LatticePoint& from, int axis, int len) {
  Path p{from};
  for (int k = 1; k < len; ++k) p.push_back(p.back() + LatticePoint::unit(from.dim(), axis));
  return p;
}

Path random_simple_path(const LatticePoint& root, std::size_t steps, Philox& rng) {
  Path p{root};
  for (std::size_t k = 0; k < steps; ++k) p.push_back(random_step(p.back(), rng));
  return loop_erase(p);
}

BitField random_field(const Window& w, double p, Philox& rng) {
  BitField f(w, false);
  for (std::size_t i = 0; i < w.size(); ++i) f.set(i, rng.uniform() < p);
  return f;
}

GoodnessField with_bad_sites(int d, int n, const std::vector<LatticePoint>& bad) {
  auto vacant = std::make_shared<const BitField>(Window::slab(d, n), true);
  const GoodnessField all(vacant, 0.0, 1);
  BitField good = all.good();
  for (const auto& y : bad) good.set(good.window().index(y), false);
  return GoodnessField(vacant, 0.0, good, all.anchors());
}

}  // namespace

TEST_CASE("energy examples") {
  const LatticePoint o(3);
  CHECK(energy({{straight(o, 0, 7)}, {1.0}}).energy == 7.0);
  const PathMeasure two{{straight(LatticePoint{0, 0, 0}, 0, 6), straight(LatticePoint{0, 5, 0}, 0, 6)}, {0.5, 0.5}};
  CHECK(energy(two).energy == doctest::Approx(3.0));
  for (int k = 1; k <= 6; ++k) {
    PathMeasure star;
    const int L = 9;
    for (int a = 0; a < k; ++a) {
      Path p = straight(o, a / 2, L);
      if (a % 2) for (auto& x : p) x = -x;
      star.paths.push_back(p);
      star.weights.push_back(1.0 / k);
    }
    CHECK(energy(star).energy == doctest::Approx(1.0 + (L - 1.0) / k).epsilon(1e-14));
  }
  CHECK_THROWS_AS(energy({{straight(o, 0, 3)}, {0.9}}), ConfigError);
  CHECK_THROWS_AS(energy({{straight(o, 0, 3), straight(o, 1, 3)}, {1.5, -0.5}}), ConfigError);
}

TEST_CASE("energy matches a brute-force tally") {
  Philox rng(31, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    PathMeasure pm;
    std::vector<std::uint32_t> w(n);
    std::uint64_t total = 0;
    for (auto& x : w) total += (x = 1 + rng.below(1000));
    for (std::size_t i = 0; i < n; ++i) {
      pm.paths.push_back(random_simple_path(LatticePoint(3), 1 + rng.below(50), rng));
      pm.weights.push_back(double(w[i]) / double(total));
    }
    double sum = 0;
    for (double x : pm.weights) sum += x;
    if (std::abs(sum - 1) > 1e-12) continue;
    // Tally in integer weight units, then scale.
    std::map<LatticePoint, std::uint64_t> tally;
    for (std::size_t i = 0; i < n; ++i) {
      std::map<LatticePoint, bool> seen;
      for (const auto& x : pm.paths[i])
        if (!seen[x]) {
          seen[x] = true;
          tally[x] += w[i];
        }
    }
    double brute = 0;
    for (const auto& [x, m] : tally) brute += double(m) * double(m);
    brute /= double(total) * double(total);
    const auto rep = energy(pm);
    CHECK(rep.energy == doctest::Approx(brute).epsilon(1e-12));
    CHECK(rep.sites == tally.size());
    CHECK(rep.energy >= rep.max_mass * rep.max_mass);
    double mass = 0;
    for (const auto& [x, m] : rep.mass) mass += m;
    CHECK(rep.energy <= mass * rep.max_mass * (1 + 1e-12));
  }
}

TEST_CASE("pushforward energy inequality") {
  const auto vac = with_bad_sites(3, 4, {});
  const auto single = pushforward_energy_check({{straight(LatticePoint{-2, 0, 0}, 0, 5)}, {1.0}}, vac);
  CHECK(single.holds);
  CHECK(single.factor == 392.0);
  Philox rng(32, 0);
  int violations = 0, ensembles = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 3 + trial % 2;
    const auto w = Window::slab(d, 4);
    const GoodnessField gf(std::make_shared<const BitField>(random_field(w, d == 3 ? 0.97 : 0.88, rng)), 0.0, 1);
    std::vector<LatticePoint> goods;
    for (std::size_t i = 0; i < gf.window().size(); ++i)
      if (gf.good().test(i)) goods.push_back(gf.window().site(i));
    if (goods.empty()) continue;
    const auto root = goods[rng.below(static_cast<std::uint32_t>(goods.size()))];
    PathMeasure pm;
    const std::size_t k = 1 + rng.below(20);
    for (std::size_t i = 0; i < k; ++i) {
      Path p{root};
      for (int s = 0; s < 30; ++s) {
        const auto y = random_step(p.back(), rng);
        if (gf.contains(y) && gf.is_good(y)) p.push_back(y);
      }
      pm.paths.push_back(loop_erase(p));
      pm.weights.push_back(1.0 / double(k));
    }
    double sum = 0;
    for (double x : pm.weights) sum += x;
    pm.weights.back() += 1.0 - sum;
    const auto rep = pushforward_energy_check(pm, gf);
    ++ensembles;
    violations += !rep.holds;
  }
  CHECK(ensembles > 80);
  CHECK(violations == 0);
}

TEST_CASE("series law on a path") {
  for (int n : {1, 2, 5, 17}) {
    std::vector<LatticePoint> line;
    for (int k = 0; k <= n; ++k) line.push_back(LatticePoint{k, 0, 0});
    const std::vector<int> radii{n};
    const auto c = effective_resistance(SiteSet(line), LatticePoint(3), radii);
    CHECK(std::abs(c.resistance[0] - n) < 1e-8);
  }
  const SiteSet lone({LatticePoint(3), LatticePoint{3, 0, 0}});
  const std::vector<int> r2{2};
  CHECK(std::isinf(effective_resistance(lone, LatticePoint(3), r2).resistance[0]));
  CHECK_THROWS_AS(effective_resistance(lone, LatticePoint{1, 0, 0}, r2), ConfigError);
}

TEST_CASE("resistance grows logarithmically in Z^2") {
  const auto box = ball_linf(LatticePoint(2), 40);
  const std::vector<int> radii{2, 3, 4, 6, 8, 12, 16, 24, 32, 40};
  const auto c = effective_resistance(box, LatticePoint(2), radii);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    x.push_back(std::log(double(radii[i])));
    y.push_back(c.resistance[i]);
  }
  const auto fit = linear_fit(x, y);
  MESSAGE("R = " << fit.intercept << " + " << fit.slope << " log n, r2 = " << fit.r2);
  CHECK(fit.r2 >= 0.95);
  CHECK(fit.slope > 0);
}

TEST_CASE("resistance increments shrink in Z^3") {
  const auto box = ball_linf(LatticePoint(3), 16);
  std::vector<int> radii;
  for (int n = 4; n <= 16; ++n) radii.push_back(n);
  const auto c = effective_resistance(box, LatticePoint(3), radii);
  for (std::size_t i = 1; i < radii.size(); ++i) CHECK(c.resistance[i] > c.resistance[i - 1]);
  for (std::size_t i = 2; i < radii.size(); ++i)
    CHECK(c.resistance[i] - c.resistance[i - 1] < c.resistance[i - 1] - c.resistance[i - 2]);
}

TEST_CASE("Rayleigh monotonicity") {
  Philox rng(33, 0);
  const Window w = Window::box(3, 6);
  const std::vector<int> radii{2, 4, 6};
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    BitField f = random_field(w, 0.6, rng);
    f.set(w.index(LatticePoint(3)), true);
    auto to_set = [&](const BitField& b) {
      std::vector<LatticePoint> v;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (b.test(i)) v.push_back(w.site(i));
      return SiteSet(v);
    };
    const auto before = effective_resistance(to_set(f), LatticePoint(3), radii);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!f.test(i) && rng.uniform() < 0.2) f.set(i, true);
    const auto after = effective_resistance(to_set(f), LatticePoint(3), radii);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      violations += after.resistance[k] > before.resistance[k] * (1 + 1e-8);
      if (k > 0) violations += before.resistance[k] < before.resistance[k - 1] * (1 - 1e-8);
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("S and T bookkeeping") {
  const auto all_good = with_bad_sites(3, 4, {});
  const auto r = st_bookkeeping(all_good, LatticePoint(3));
  CHECK(r.good);
  CHECK(r.S == std::vector<LatticePoint>{LatticePoint(3)});
  CHECK(r.sum_T == 1.0);
  CHECK(!r.censored);
  CHECK(r.overlap_tail[0] == 1);
  CHECK(r.overlap_tail[1] == 0);

  const auto one_bad = with_bad_sites(3, 4, {LatticePoint(3)});
  const auto b = st_bookkeeping(one_bad, LatticePoint(3));
  CHECK(!b.good);
  CHECK(b.S.size() == 26);
  CHECK(b.sum_T == 26.0 * 2);
  // A neighbor's S(z) = {z} meets S(0), and so does the bad site's own S.
  CHECK(b.overlap_tail[1] == 1);
  CHECK(b.overlap_tail[2] == 0);
  const auto g = st_bookkeeping(one_bad, LatticePoint{1, 0, 0});
  CHECK(g.sum_T == 2.0);
  CHECK(g.overlap_tail[1] == 1);
  CHECK_THROWS_AS(st_bookkeeping(one_bad, LatticePoint{9, 0, 0}), CoverageError);

  Philox rng(34, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const GoodnessField gf(std::make_shared<const BitField>(random_field(Window::slab(3, 5), 0.92, rng)), 0.0, 1);
    const auto rep = st_bookkeeping(gf, LatticePoint(3));
    for (std::size_t k = 1; k < rep.overlap_tail.size(); ++k) CHECK(rep.overlap_tail[k] <= rep.overlap_tail[k - 1]);
    CHECK(rep.sum_T >= double(rep.S.size()));
  }
}
