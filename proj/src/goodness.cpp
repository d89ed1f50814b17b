#include "interlace/goodness.hpp"

#include <algorithm>

#include "interlace/error.hpp"
#include "interlace/parallel.hpp"
#include "interlace/union_find.hpp"
#include "interlace/vacancy.hpp"

namespace interlace {

std::array<LatticePoint, kCubeCount> cube_neighborhood(const LatticePoint& y3) {
  if (y3.dim() != 3) throw ConfigError("goodness is defined on Z^3 sites");
  std::array<LatticePoint, kCubeCount> out;
  out[0] = y3;
  for (int a = 0; a < 3; ++a) {
    out[static_cast<std::size_t>(1 + 2 * a)] = y3 - LatticePoint::unit(3, a);
    out[static_cast<std::size_t>(2 + 2 * a)] = y3 + LatticePoint::unit(3, a);
  }
  return out;
}

bool closure_qualifies(std::size_t closure_count, int d) noexcept {
  const auto d2 = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  return static_cast<std::uint64_t>(closure_count) * d2 >= (d2 - 1) * (std::uint64_t{1} << d);
}

CubeComponents cube_components(std::span<const char> vacant, int d) {
  const std::size_t n = std::size_t{1} << d;
  if (vacant.size() != n) throw ConfigError("cube mask has the wrong size");
  UnionFind uf(n);
  for (std::size_t b = 0; b < n; ++b) {
    if (!vacant[b]) continue;
    for (int i = 0; i < d; ++i) {
      const std::size_t c = b ^ (std::size_t{1} << i);
      if (c > b && vacant[c]) uf.unite(b, c);
    }
  }
  CubeComponents out;
  out.label.assign(n, -1);
  std::vector<std::int32_t> root_label(n, -1);
  for (std::size_t b = 0; b < n; ++b) {
    if (!vacant[b]) continue;
    const std::size_t r = uf.find(b);
    if (root_label[r] < 0) {
      root_label[r] = static_cast<std::int32_t>(out.anchor.size());
      out.anchor.push_back(static_cast<std::uint32_t>(b));
      out.size.push_back(0);
    }
    out.label[b] = root_label[r];
    ++out.size[static_cast<std::size_t>(root_label[r])];
  }
  // Closure within the cube: the component plus cube sites one bit-flip away.
  out.closure.assign(out.anchor.size(), 0);
  std::vector<std::size_t> stamp(out.anchor.size(), n);
  for (std::size_t b = 0; b < n; ++b) {
    auto touch = [&](std::int32_t l) {
      if (l < 0) return;
      const auto k = static_cast<std::size_t>(l);
      if (stamp[k] != b) {
        stamp[k] = b;
        ++out.closure[k];
      }
    };
    touch(out.label[b]);
    for (int i = 0; i < d; ++i) touch(out.label[b ^ (std::size_t{1} << i)]);
  }
  return out;
}

std::size_t uniqueness_check(std::span<const char> vacant, int d) {
  const auto cc = cube_components(vacant, d);
  return static_cast<std::size_t>(
      std::count_if(cc.closure.begin(), cc.closure.end(), [d](std::uint32_t c) { return closure_qualifies(c, d); }));
}

namespace {

// Window offsets of the 2^d cube sites, per mask.
std::vector<std::size_t> cube_offsets(const Window& w) {
  const int d = w.dim();
  std::vector<std::size_t> off(std::size_t{1} << d, 0);
  for (std::size_t b = 0; b < off.size(); ++b)
    for (int i = 0; i < d; ++i)
      if ((b >> (d - 1 - i)) & 1u) off[b] += w.stride(i);
  return off;
}

GoodnessWitness classify_with(const LatticePoint& y3, const BitField& vacant, const std::vector<std::size_t>& offsets) {
  const Window& w = vacant.window();
  const int d = w.dim();
  if (d < 3) throw ConfigError("goodness needs ambient dimension d >= 3");
  const std::size_t n = std::size_t{1} << d;
  const auto zs = cube_neighborhood(y3);

  std::array<std::vector<char>, kCubeCount> masks;
  std::array<CubeComponents, kCubeCount> comps;
  for (std::size_t k = 0; k < kCubeCount; ++k) {
    const LatticePoint base = embed(zs[k], d).scaled(2);
    LatticePoint top = base;
    for (int i = 0; i < d; ++i) top[i] += 1;
    if (!w.contains(base) || !w.contains(top))
      throw CoverageError("hypercube C_" + zs[k].str() + " leaves the vacant window");
    const std::size_t origin = w.index(base);
    masks[k].resize(n);
    for (std::size_t b = 0; b < n; ++b) masks[k][b] = vacant.test(origin + offsets[b]) ? 1 : 0;
    comps[k] = cube_components(masks[k], d);
  }

  GoodnessWitness out;
  out.gamma = LatticePoint(d);
  for (const auto& c : comps) {
    if (std::none_of(c.closure.begin(), c.closure.end(), [d](std::uint32_t v) { return closure_qualifies(v, d); }))
      return out;
  }

  // Vacant sites of the 7 cubes, id = k * 2^d + mask. Cubes C_y and C_{y +- e_a}
  // touch across the face where coordinate a is 1 (resp. 0) in C_y.
  UnionFind uf(kCubeCount * n);
  for (std::size_t k = 0; k < kCubeCount; ++k)
    for (std::size_t b = 0; b < n; ++b)
      if (masks[k][b] && comps[k].label[b] >= 0)
        uf.unite(k * n + b, k * n + comps[k].anchor[static_cast<std::size_t>(comps[k].label[b])]);
  for (int a = 0; a < 3; ++a) {
    const std::size_t bit = std::size_t{1} << (d - 1 - a);
    for (int s = 0; s < 2; ++s) {
      const std::size_t k = static_cast<std::size_t>(1 + 2 * a + s);  // s = 0: minus side, 1: plus side
      for (std::size_t b = 0; b < n; ++b) {
        const bool on_face = s == 1 ? (b & bit) != 0 : (b & bit) == 0;
        if (!on_face || !masks[0][b]) continue;
        const std::size_t partner = b ^ bit;
        if (masks[k][partner]) uf.unite(b, k * n + partner);
      }
    }
  }

  const auto& center = comps[0];
  for (std::size_t c = 0; c < center.anchor.size(); ++c) {
    if (!closure_qualifies(center.closure[c], d)) continue;
    const std::size_t cls = uf.find(center.anchor[c]);
    std::array<std::uint32_t, kCubeCount> chosen{};
    chosen[0] = center.anchor[c];
    bool all = true;
    for (std::size_t k = 1; k < kCubeCount && all; ++k) {
      bool found = false;
      for (std::size_t j = 0; j < comps[k].anchor.size(); ++j) {
        if (closure_qualifies(comps[k].closure[j], d) && uf.find(k * n + comps[k].anchor[j]) == cls) {
          chosen[k] = comps[k].anchor[j];
          found = true;
          break;
        }
      }
      all = found;
    }
    if (!all) continue;
    out.good = true;
    out.anchor = chosen;
    out.gamma = embed(y3, d).scaled(2);
    for (int i = 0; i < d; ++i) out.gamma[i] += static_cast<int>((chosen[0] >> (d - 1 - i)) & 1u);
    return out;
  }
  return out;
}

}  // namespace

GoodnessWitness classify(const LatticePoint& y3, const BitField& vacant) {
  return classify_with(y3, vacant, cube_offsets(vacant.window()));
}

Window goodness_window(const Window& ambient) {
  const int d = ambient.dim();
  if (d < 3) throw ConfigError("goodness needs ambient dimension d >= 3");
  for (int i = 3; i < d; ++i)
    if (ambient.lo()[i] > 0 || ambient.hi()[i] < 1) throw CoverageError("window does not contain the slab {0,1}^(d-3)");
  auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  LatticePoint lo(3), hi(3);
  for (int a = 0; a < 3; ++a) {
    // 2(y-1) >= lo and 2(y+1)+1 <= hi
    lo[a] = -floor_div(-(ambient.lo()[a] + 2), 2);
    hi[a] = floor_div(ambient.hi()[a] - 3, 2);
    if (lo[a] > hi[a]) throw CoverageError("window too small for any goodness site");
  }
  return Window(lo, hi);
}

GoodnessField::GoodnessField(std::shared_ptr<const BitField> vacant, double u, int threads)
    : vacant_(std::move(vacant)), u_(u) {
  const Window gw = goodness_window(vacant_->window());
  good_ = BitField(gw, false);
  anchors_.assign(gw.size(), {});
  const auto offsets = cube_offsets(vacant_->window());
  std::vector<char> flags(gw.size(), 0);
  parallel_for(gw.size(), threads, [&](std::size_t i) {
    const auto wit = classify_with(gw.site(i), *vacant_, offsets);
    flags[i] = wit.good ? 1 : 0;
    if (wit.good) anchors_[i] = wit.anchor;
  });
  for (std::size_t i = 0; i < gw.size(); ++i) good_.set(i, flags[i] != 0);
}

GoodnessField::GoodnessField(std::shared_ptr<const BitField> vacant, double u, BitField good,
                             std::vector<std::array<std::uint32_t, kCubeCount>> anchors)
    : vacant_(std::move(vacant)), u_(u), good_(std::move(good)), anchors_(std::move(anchors)) {
  if (!(good_.window() == goodness_window(vacant_->window())))
    throw IoError("goodness window does not match the vacant field");
  if (anchors_.size() != good_.size()) throw IoError("goodness anchors do not match the window");
}

LatticePoint GoodnessField::gamma(const LatticePoint& y) const {
  if (!contains(y) || !is_good(y)) throw ConfigError("Gamma is defined on good sites only: " + y.str());
  const int d = ambient_dim();
  const std::uint32_t m = anchors_[window().index(y)][0];
  LatticePoint g = embed(y, d).scaled(2);
  for (int i = 0; i < d; ++i) g[i] += static_cast<int>((m >> (d - 1 - i)) & 1u);
  return g;
}

BadClusterStats bad_clusters(const GoodnessField& gf) {
  BadClusterStats st;
  st.sites = gf.window().size();
  const BitField bad = gf.good().complement();
  const auto lab = components(bad, Adjacency::star);
  st.sizes = lab.sizes;
  std::sort(st.sizes.begin(), st.sizes.end(), std::greater<>());
  st.max_size = st.sizes.empty() ? 0 : st.sizes.front();
  if (st.sizes.empty()) return st;
  st.tail.assign(st.max_size + 1, 0.0);
  for (std::size_t s : st.sizes) st.tail[s] += static_cast<double>(s);
  for (std::size_t N = st.max_size; N-- > 0;) st.tail[N] += st.tail[N + 1];
  for (double& t : st.tail) t /= static_cast<double>(st.sites);
  return st;
}

}  // namespace interlace
