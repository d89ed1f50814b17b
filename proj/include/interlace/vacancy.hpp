#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interlace/lattice.hpp"
#include "interlace/sampler.hpp"

namespace interlace {

enum class Adjacency : std::uint8_t { nearest = 0, star = 1 };

// Offsets of the nearest or star neighborhood with their index deltas in a window.
struct Stencil {
  std::vector<LatticePoint> offsets;
  std::vector<std::ptrdiff_t> deltas;
};
Stencil make_stencil(const Window& w, Adjacency adj);

// Calls fn(j) for every in-window neighbor j of site index i.
template <class Fn>
void for_each_neighbor(const Window& w, const Stencil& s, std::size_t i, Fn&& fn) {
  const LatticePoint x = w.site(i);
  for (std::size_t k = 0; k < s.offsets.size(); ++k) {
    bool inside = true;
    for (int a = 0; a < w.dim() && inside; ++a) {
      const int c = x[a] + s.offsets[k][a];
      inside = c >= w.lo()[a] && c <= w.hi()[a];
    }
    if (inside) fn(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + s.deltas[k]));
  }
}

struct ClusterLabeling {
  Window window;
  Adjacency adjacency = Adjacency::nearest;
  // Per window site: component id, or -1 for sites outside the field. Ids are
  // numbered in order of each component's smallest site index.
  std::vector<std::int64_t> label;
  std::vector<std::size_t> sizes;

  std::size_t count() const noexcept { return sizes.size(); }
  std::size_t largest() const noexcept;
};

ClusterLabeling components(const BitField& field, Adjacency adj);

// True iff B_inf(x, L) is joined to the interior boundary of B_inf(x, 2L) by
// a path of one-valued sites. Throws CoverageError unless B_inf(x, 2L) lies in
// the field's window.
bool crossing(const BitField& field, const LatticePoint& x, int L, Adjacency adj = Adjacency::star);

enum class Observable : std::uint8_t { vacant_crossing = 0, largest_fraction = 1 };
std::string to_string(Observable o);
Observable parse_observable(const std::string& s);

struct ScanOptions {
  std::vector<Observable> observables{Observable::vacant_crossing, Observable::largest_fraction};
  Adjacency cluster_adjacency = Adjacency::nearest;
  Adjacency crossing_adjacency = Adjacency::star;
  int crossing_scale = 0;  // L; 0 picks the largest L with a 2L margin around the window center
};

struct ScanRow {
  double u = 0;
  Observable observable = Observable::vacant_crossing;
  double mean = 0;
  double std_error = 0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
};

struct ScanResult {
  std::vector<ScanRow> rows;  // grid-major, observables in option order
  // values[o][r][k]: observable o on replica r at grid point k.
  std::vector<std::vector<std::vector<double>>> values;
  int crossing_scale = 0;
};

// One sample at u_max = max(grid) per replica, thinned to every grid point.
ScanResult scan_u(const InterlacementSampler& sampler, std::span<const double> grid, std::size_t replicas,
                  std::uint64_t seed, int threads, const ScanOptions& options = {});

std::string to_ndjson(const ScanRow& row, const std::string& config_hash = {});

}  // namespace interlace
