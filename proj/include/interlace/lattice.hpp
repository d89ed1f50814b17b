#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace interlace {

inline constexpr int kMaxDim = 12;

// A site of Z^d, 1 <= d <= kMaxDim. Coordinates past `dim` are always zero.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(int dim);
  LatticePoint(std::initializer_list<int> coords);
  explicit LatticePoint(std::span<const int> coords);

  static LatticePoint unit(int dim, int axis, int sign = 1);

  int dim() const noexcept { return dim_; }
  int operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }

  LatticePoint& operator+=(const LatticePoint& o) noexcept;
  LatticePoint& operator-=(const LatticePoint& o) noexcept;
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) noexcept { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) noexcept { return a -= b; }
  LatticePoint operator-() const noexcept;
  LatticePoint scaled(int k) const noexcept;

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) noexcept {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }
  // Lexicographic on coordinates (dimensions are expected to agree).
  friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) noexcept {
    if (auto c = a.c_ <=> b.c_; c != 0) return c;
    return a.dim_ <=> b.dim_;
  }

  std::string str() const;

 private:
  std::array<std::int32_t, kMaxDim> c_{};
  int dim_ = 0;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

long norm_l1(const LatticePoint& x) noexcept;
long norm_linf(const LatticePoint& x) noexcept;
double norm_l2(const LatticePoint& x) noexcept;

// 2d nearest neighbors (star = false) or 3^d - 1 star-neighbors (star = true).
std::vector<LatticePoint> neighbors(const LatticePoint& x, bool star);

// Embeds a Z^3 site into Z^d as (y1, y2, y3, 0, ..., 0).
LatticePoint embed(const LatticePoint& y3, int d);

// C_y = 2y + {0,1}^d for a Z^3 site y; sites in lexicographic order.
std::vector<LatticePoint> hypercube(const LatticePoint& y3, int d);

// Finite set of sites in sorted order with a hash index.
class SiteSet {
 public:
  SiteSet() = default;
  explicit SiteSet(std::vector<LatticePoint> sites);

  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }
  int dim() const noexcept { return sites_.empty() ? 0 : sites_.front().dim(); }
  bool contains(const LatticePoint& p) const { return index_.count(p) != 0; }
  // Position in sorted order, or -1.
  long index_of(const LatticePoint& p) const;

  const LatticePoint& operator[](std::size_t i) const noexcept { return sites_[i]; }
  auto begin() const noexcept { return sites_.begin(); }
  auto end() const noexcept { return sites_.end(); }
  const std::vector<LatticePoint>& sites() const noexcept { return sites_; }

  friend bool operator==(const SiteSet& a, const SiteSet& b) { return a.sites_ == b.sites_; }

  SiteSet united(const SiteSet& other) const;
  bool is_subset_of(const SiteSet& other) const;

 private:
  std::vector<LatticePoint> sites_;
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index_;
};

SiteSet ball_linf(const LatticePoint& center, int radius);
SiteSet ball_l1(const LatticePoint& center, int radius);
SiteSet ball_l2(const LatticePoint& center, double radius);

enum class BoundaryKind {
  interior,       // sites of K with a nearest neighbor outside K
  interior_star,  // sites of K with a star-neighbor outside K
  outer,          // sites outside K with a nearest neighbor in K
  outer_star,     // sites outside K with a star-neighbor in K
  exterior,       // outer sites starting an infinite simple path avoiding K
  exterior_star,  // outer_star sites starting an infinite simple path avoiding K
};

SiteSet boundary(const SiteSet& K, BoundaryKind kind);

// True if the set is connected under nearest (star = false) or star adjacency.
bool is_connected(const SiteSet& K, bool star);

enum class WindowShape : std::uint8_t { box = 0, slab = 1 };

// Axis-aligned box lo..hi (inclusive). Site indices are row-major with the
// last axis fastest.
class Window {
 public:
  Window() = default;
  Window(LatticePoint lo, LatticePoint hi, WindowShape shape = WindowShape::box, int slab_n = 0);

  static Window box(int d, int radius);
  // (2 * B_inf^3(0, n) + {0,1}^3) x {0,1}^(d-3): the sites covered by the
  // hypercubes C_z, |z|_inf <= n.
  static Window slab(int d, int n);

  int dim() const noexcept { return lo_.dim(); }
  const LatticePoint& lo() const noexcept { return lo_; }
  const LatticePoint& hi() const noexcept { return hi_; }
  WindowShape shape() const noexcept { return shape_; }
  int slab_n() const noexcept { return slab_n_; }
  int extent(int axis) const noexcept { return hi_[axis] - lo_[axis] + 1; }
  std::size_t size() const noexcept { return size_; }

  bool contains(const LatticePoint& p) const noexcept {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return true;
  }
  std::size_t index(const LatticePoint& p) const noexcept {
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i)
      idx = idx * static_cast<std::size_t>(extent(i)) + static_cast<std::size_t>(p[i] - lo_[i]);
    return idx;
  }
  LatticePoint site(std::size_t index) const noexcept;
  std::size_t stride(int axis) const noexcept { return strides_[static_cast<std::size_t>(axis)]; }

  // Largest Euclidean norm over the window's sites.
  double radius_l2() const noexcept;
  SiteSet sites() const;

  friend bool operator==(const Window& a, const Window& b) noexcept {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.shape_ == b.shape_ && a.slab_n_ == b.slab_n_;
  }

 private:
  LatticePoint lo_, hi_;
  WindowShape shape_ = WindowShape::box;
  int slab_n_ = 0;
  std::size_t size_ = 0;
  std::array<std::size_t, kMaxDim> strides_{};
};

// One bit per site of a window.
class BitField {
 public:
  BitField() = default;
  BitField(Window window, bool value);

  const Window& window() const noexcept { return window_; }
  std::size_t size() const noexcept { return window_.size(); }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool at(const LatticePoint& p) const noexcept { return test(window_.index(p)); }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  void fill(bool v) noexcept;
  std::size_t count() const noexcept;
  BitField complement() const;
  bool is_subset_of(const BitField& other) const noexcept;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

  friend bool operator==(const BitField& a, const BitField& b) noexcept {
    return a.window_ == b.window_ && a.words_ == b.words_;
  }

 private:
  void clear_padding() noexcept;

  Window window_;
  std::vector<std::uint64_t> words_;
};

}  // namespace interlace
