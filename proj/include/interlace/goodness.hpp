#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "interlace/lattice.hpp"

namespace interlace {

inline constexpr int kCubeCount = 7;

// The Z^3 sites z with |y - z|_1 <= 1, in the order y, y-e1, y+e1, y-e2, y+e2, y-e3, y+e3.
std::array<LatticePoint, kCubeCount> cube_neighborhood(const LatticePoint& y3);

// |closure(c) n C| >= (1 - d^-2) 2^d, compared in integers.
bool closure_qualifies(std::size_t closure_count, int d) noexcept;

// Components of a subset V of the unit hypercube {0,1}^d under nearest
// adjacency. Cube sites are indexed by masks whose bit (d-1-i) is coordinate
// i, so mask order is lexicographic order.
struct CubeComponents {
  std::vector<std::int32_t> label;      // per mask: component id or -1
  std::vector<std::uint32_t> anchor;    // smallest mask per component (ids are in anchor order)
  std::vector<std::uint32_t> size;
  std::vector<std::uint32_t> closure;   // |closure(c) n C|
};
CubeComponents cube_components(std::span<const char> vacant, int d);

// Number of components of V (given per mask) whose closure covers at least
// (1 - d^-2) 2^d sites of the cube.
std::size_t uniqueness_check(std::span<const char> vacant, int d);

struct GoodnessWitness {
  bool good = false;
  // Smallest cube-local mask of the chosen component c_{y,z}, per cube in
  // cube_neighborhood order. Meaningful only for good sites.
  std::array<std::uint32_t, kCubeCount> anchor{};
  LatticePoint gamma;  // Gamma(y) = lexicographic minimum of c_{y,y}
};

// Goodness of y from the vacant field on the 7 cubes C_z, |y - z|_1 <= 1.
// Throws CoverageError if a cube leaves the field's window.
GoodnessWitness classify(const LatticePoint& y3, const BitField& vacant);

// The Z^3 sites whose 7 cubes lie in the window.
Window goodness_window(const Window& ambient);

class GoodnessField {
 public:
  GoodnessField() = default;
  GoodnessField(std::shared_ptr<const BitField> vacant, double u, int threads);
  // For deserialization; trusts its inputs beyond basic shape checks.
  GoodnessField(std::shared_ptr<const BitField> vacant, double u, BitField good,
                std::vector<std::array<std::uint32_t, kCubeCount>> anchors);

  const Window& window() const noexcept { return good_.window(); }
  int ambient_dim() const noexcept { return vacant_->window().dim(); }
  double u() const noexcept { return u_; }
  const BitField& vacant() const noexcept { return *vacant_; }
  std::shared_ptr<const BitField> vacant_ptr() const noexcept { return vacant_; }
  const BitField& good() const noexcept { return good_; }
  const std::vector<std::array<std::uint32_t, kCubeCount>>& anchors() const noexcept { return anchors_; }

  bool contains(const LatticePoint& y) const noexcept { return window().contains(y); }
  bool is_good(const LatticePoint& y) const noexcept { return good_.at(y); }
  // Gamma(y) for a good site; throws ConfigError otherwise.
  LatticePoint gamma(const LatticePoint& y) const;

  friend bool operator==(const GoodnessField& a, const GoodnessField& b) {
    return a.u_ == b.u_ && *a.vacant_ == *b.vacant_ && a.good_ == b.good_ && a.anchors_ == b.anchors_;
  }

 private:
  std::shared_ptr<const BitField> vacant_;
  double u_ = 0;
  BitField good_;
  std::vector<std::array<std::uint32_t, kCubeCount>> anchors_;
};

struct BadClusterStats {
  std::vector<std::size_t> sizes;  // star clusters of bad sites, descending
  std::size_t max_size = 0;
  std::size_t sites = 0;           // sites in the goodness window
  // tail[N] = fraction of window sites lying in a bad cluster of size >= N,
  // for N = 0..max_size (tail[0] counts every bad site).
  std::vector<double> tail;
  bool empty() const noexcept { return sizes.empty(); }
};

BadClusterStats bad_clusters(const GoodnessField& gf);

}  // namespace interlace
