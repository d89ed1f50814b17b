#include "interlace/vacancy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "interlace/error.hpp"
#include "interlace/parallel.hpp"
#include "interlace/stats.hpp"
#include "interlace/union_find.hpp"
#include "json.hpp"

namespace interlace {

Stencil make_stencil(const Window& w, Adjacency adj) {
  Stencil s;
  const LatticePoint origin(w.dim());
  for (const auto& y : neighbors(origin, adj == Adjacency::star)) {
    std::ptrdiff_t delta = 0;
    for (int a = 0; a < w.dim(); ++a) delta += static_cast<std::ptrdiff_t>(w.stride(a)) * y[a];
    s.offsets.push_back(y);
    s.deltas.push_back(delta);
  }
  return s;
}

std::size_t ClusterLabeling::largest() const noexcept {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

ClusterLabeling components(const BitField& field, Adjacency adj) {
  const Window& w = field.window();
  const Stencil st = make_stencil(w, adj);
  UnionFind uf(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!field.test(i)) continue;
    for_each_neighbor(w, st, i, [&](std::size_t j) {
      if (j > i && field.test(j)) uf.unite(i, j);
    });
  }
  ClusterLabeling out;
  out.window = w;
  out.adjacency = adj;
  out.label.assign(w.size(), -1);
  std::vector<std::int64_t> root_label(w.size(), -1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!field.test(i)) continue;
    const std::size_t r = uf.find(i);
    if (root_label[r] < 0) {
      root_label[r] = static_cast<std::int64_t>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.label[i] = root_label[r];
    ++out.sizes[static_cast<std::size_t>(root_label[r])];
  }
  return out;
}

bool crossing(const BitField& field, const LatticePoint& x, int L, Adjacency adj) {
  const Window& w = field.window();
  if (L < 0) throw ConfigError("crossing scale must be nonnegative");
  for (int a = 0; a < w.dim(); ++a) {
    if (x[a] - 2 * L < w.lo()[a] || x[a] + 2 * L > w.hi()[a])
      throw CoverageError("window too small: B_inf(" + x.str() + ", " + std::to_string(2 * L) + ") leaves it");
  }
  const Stencil st = make_stencil(w, adj);
  auto dist = [&](std::size_t i) {
    const LatticePoint y = w.site(i);
    return norm_linf(y - x);
  };
  std::vector<char> seen(w.size(), 0);
  std::deque<std::size_t> queue;
  // Seed with the one-valued sites of B_inf(x, L).
  LatticePoint lo = x, hi = x;
  for (int a = 0; a < x.dim(); ++a) {
    lo[a] -= L;
    hi[a] += L;
  }
  const Window inner(lo, hi);
  for (std::size_t k = 0; k < inner.size(); ++k) {
    const std::size_t i = w.index(inner.site(k));
    if (field.test(i)) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    if (dist(i) == 2 * L) return true;
    for_each_neighbor(w, st, i, [&](std::size_t j) {
      if (!seen[j] && field.test(j) && dist(j) <= 2 * L) {
        seen[j] = 1;
        queue.push_back(j);
      }
    });
  }
  return false;
}

std::string to_string(Observable o) {
  return o == Observable::vacant_crossing ? "vacant_crossing" : "largest_fraction";
}

Observable parse_observable(const std::string& s) {
  if (s == "vacant_crossing") return Observable::vacant_crossing;
  if (s == "largest_fraction") return Observable::largest_fraction;
  throw ConfigError("unknown observable '" + s + "'");
}

ScanResult scan_u(const InterlacementSampler& sampler, std::span<const double> grid, std::size_t replicas,
                  std::uint64_t seed, int threads, const ScanOptions& options) {
  if (grid.empty()) throw ConfigError("empty u grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("u grid must be sorted");
  if (grid.front() < 0) throw ConfigError("u grid must be nonnegative");
  const Window& w = sampler.window();

  LatticePoint center(w.dim());
  int margin = 1 << 30;
  for (int a = 0; a < w.dim(); ++a) {
    center[a] = w.lo()[a] + (w.hi()[a] - w.lo()[a]) / 2;
    margin = std::min({margin, center[a] - w.lo()[a], w.hi()[a] - center[a]});
  }
  ScanResult res;
  res.crossing_scale = options.crossing_scale > 0 ? options.crossing_scale : margin / 2;
  const bool wants_crossing = std::find(options.observables.begin(), options.observables.end(),
                                        Observable::vacant_crossing) != options.observables.end();
  if (wants_crossing && 2 * res.crossing_scale > margin)
    throw CoverageError("window too small for crossing scale " + std::to_string(res.crossing_scale));

  const std::size_t no = options.observables.size();
  res.values.assign(no, std::vector<std::vector<double>>(replicas, std::vector<double>(grid.size(), 0.0)));
  for_each_replica(sampler, grid.back(), replicas, seed, threads, [&](std::size_t r, const InterlacementSample& s) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const BitField vacant = occupancy_of(s, grid[k]).complement();
      for (std::size_t o = 0; o < no; ++o) {
        double v = 0;
        if (options.observables[o] == Observable::vacant_crossing) {
          v = crossing(vacant, center, res.crossing_scale, options.crossing_adjacency) ? 1.0 : 0.0;
        } else {
          v = static_cast<double>(components(vacant, options.cluster_adjacency).largest()) /
              static_cast<double>(w.size());
        }
        res.values[o][r][k] = v;
      }
    }
  });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t o = 0; o < no; ++o) {
      RunningStats st;
      for (std::size_t r = 0; r < replicas; ++r) st.add(res.values[o][r][k]);
      res.rows.push_back({grid[k], options.observables[o], st.mean(), st.stderr_mean(), replicas, seed});
    }
  }
  return res;
}

std::string to_ndjson(const ScanRow& row, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["u"] = row.u;
  j["observable"] = to_string(row.observable);
  j["mean"] = row.mean;
  j["stderr"] = row.std_error;
  j["replicas"] = row.replicas;
  j["seed"] = row.seed;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j.dump();
}

}  // namespace interlace
