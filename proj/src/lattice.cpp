#include "interlace/lattice.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "interlace/error.hpp"

namespace interlace {

LatticePoint::LatticePoint(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("lattice dimension out of range: " + std::to_string(dim));
}

LatticePoint::LatticePoint(std::initializer_list<int> coords) : LatticePoint(static_cast<int>(coords.size())) {
  std::size_t i = 0;
  for (int v : coords) c_[i++] = v;
}

LatticePoint::LatticePoint(std::span<const int> coords) : LatticePoint(static_cast<int>(coords.size())) {
  for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = coords[i];
}

LatticePoint LatticePoint::unit(int dim, int axis, int sign) {
  LatticePoint p(dim);
  p[axis] = sign;
  return p;
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) noexcept {
  for (int i = 0; i < dim_; ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) noexcept {
  for (int i = 0; i < dim_; ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
  return *this;
}

LatticePoint LatticePoint::operator-() const noexcept {
  LatticePoint p = *this;
  for (int i = 0; i < dim_; ++i) p[i] = -p[i];
  return p;
}

LatticePoint LatticePoint::scaled(int k) const noexcept {
  LatticePoint p = *this;
  for (int i = 0; i < dim_; ++i) p[i] *= k;
  return p;
}

std::string LatticePoint::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[static_cast<std::size_t>(i)];
  os << ')';
  return os.str();
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint32_t>(p[i]);
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

long norm_l1(const LatticePoint& x) noexcept {
  long s = 0;
  for (int i = 0; i < x.dim(); ++i) s += std::labs(x[i]);
  return s;
}

long norm_linf(const LatticePoint& x) noexcept {
  long s = 0;
  for (int i = 0; i < x.dim(); ++i) s = std::max(s, std::labs(x[i]));
  return s;
}

double norm_l2(const LatticePoint& x) noexcept {
  double s = 0;
  for (int i = 0; i < x.dim(); ++i) s += static_cast<double>(x[i]) * x[i];
  return std::sqrt(s);
}

std::vector<LatticePoint> neighbors(const LatticePoint& x, bool star) {
  const int d = x.dim();
  std::vector<LatticePoint> out;
  if (!star) {
    out.reserve(static_cast<std::size_t>(2 * d));
    for (int i = 0; i < d; ++i) {
      for (int s : {-1, 1}) {
        LatticePoint y = x;
        y[i] += s;
        out.push_back(y);
      }
    }
    return out;
  }
  long total = 1;
  for (int i = 0; i < d; ++i) total *= 3;
  out.reserve(static_cast<std::size_t>(total - 1));
  for (long code = 0; code < total; ++code) {
    LatticePoint y = x;
    long c = code;
    bool zero = true;
    for (int i = d - 1; i >= 0; --i) {
      int off = static_cast<int>(c % 3) - 1;
      c /= 3;
      y[i] += off;
      zero = zero && off == 0;
    }
    if (!zero) out.push_back(y);
  }
  return out;
}

LatticePoint embed(const LatticePoint& y3, int d) {
  if (y3.dim() != 3) throw ConfigError("embed expects a Z^3 site");
  if (d < 3) throw ConfigError("ambient dimension must be at least 3");
  LatticePoint x(d);
  for (int i = 0; i < 3; ++i) x[i] = y3[i];
  return x;
}

std::vector<LatticePoint> hypercube(const LatticePoint& y3, int d) {
  const LatticePoint base = embed(y3, d).scaled(2);
  std::vector<LatticePoint> out;
  out.reserve(std::size_t{1} << d);
  for (unsigned bits = 0; bits < (1u << d); ++bits) {
    LatticePoint x = base;
    // Bit (d-1-i) drives coordinate i, so the output is lexicographically sorted.
    for (int i = 0; i < d; ++i) x[i] += static_cast<int>((bits >> (d - 1 - i)) & 1u);
    out.push_back(x);
  }
  return out;
}

SiteSet::SiteSet(std::vector<LatticePoint> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  index_.reserve(sites_.size());
  for (std::size_t i = 0; i < sites_.size(); ++i) index_.emplace(sites_[i], i);
}

long SiteSet::index_of(const LatticePoint& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

SiteSet SiteSet::united(const SiteSet& other) const {
  std::vector<LatticePoint> all = sites_;
  all.insert(all.end(), other.sites_.begin(), other.sites_.end());
  return SiteSet(std::move(all));
}

bool SiteSet::is_subset_of(const SiteSet& other) const {
  return std::all_of(sites_.begin(), sites_.end(), [&](const LatticePoint& p) { return other.contains(p); });
}

SiteSet ball_linf(const LatticePoint& center, int radius) {
  const int d = center.dim();
  LatticePoint lo = center, hi = center;
  for (int i = 0; i < d; ++i) {
    lo[i] -= radius;
    hi[i] += radius;
  }
  return Window(lo, hi).sites();
}

SiteSet ball_l1(const LatticePoint& center, int radius) {
  std::vector<LatticePoint> out;
  for (const auto& p : ball_linf(center, radius))
    if (norm_l1(p - center) <= radius) out.push_back(p);
  return SiteSet(std::move(out));
}

SiteSet ball_l2(const LatticePoint& center, double radius) {
  std::vector<LatticePoint> out;
  const int r = static_cast<int>(std::floor(radius));
  for (const auto& p : ball_linf(center, r)) {
    double s = 0;
    for (int i = 0; i < p.dim(); ++i) s += static_cast<double>(p[i] - center[i]) * (p[i] - center[i]);
    if (s <= radius * radius) out.push_back(p);
  }
  return SiteSet(std::move(out));
}

namespace {

// Sites of K^c reachable by nearest-neighbor paths from the surface of the
// bounding box of K padded by one layer. Such sites lie in the unbounded
// component of K^c.
std::vector<bool> escaping_mask(const SiteSet& K, const Window& padded) {
  std::vector<bool> reach(padded.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < padded.size(); ++i) {
    const LatticePoint p = padded.site(i);
    bool surface = false;
    for (int a = 0; a < p.dim(); ++a) surface = surface || p[a] == padded.lo()[a] || p[a] == padded.hi()[a];
    if (surface) {
      reach[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const LatticePoint p = padded.site(queue.front());
    queue.pop_front();
    for (const auto& q : neighbors(p, false)) {
      if (!padded.contains(q)) continue;
      const std::size_t j = padded.index(q);
      if (reach[j] || K.contains(q)) continue;
      reach[j] = true;
      queue.push_back(j);
    }
  }
  return reach;
}

}  // namespace

SiteSet boundary(const SiteSet& K, BoundaryKind kind) {
  if (K.empty()) return {};
  const bool star = kind == BoundaryKind::interior_star || kind == BoundaryKind::outer_star ||
                    kind == BoundaryKind::exterior_star;
  std::vector<LatticePoint> out;
  if (kind == BoundaryKind::interior || kind == BoundaryKind::interior_star) {
    for (const auto& x : K) {
      for (const auto& y : neighbors(x, star)) {
        if (!K.contains(y)) {
          out.push_back(x);
          break;
        }
      }
    }
    return SiteSet(std::move(out));
  }
  for (const auto& x : K)
    for (const auto& y : neighbors(x, star))
      if (!K.contains(y)) out.push_back(y);
  SiteSet outer(std::move(out));
  if (kind == BoundaryKind::outer || kind == BoundaryKind::outer_star) return outer;

  const int d = K.dim();
  LatticePoint lo = K[0], hi = K[0];
  for (const auto& x : K) {
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  }
  for (int i = 0; i < d; ++i) {
    lo[i] -= 1;
    hi[i] += 1;
  }
  const Window padded(lo, hi);
  const auto reach = escaping_mask(K, padded);
  std::vector<LatticePoint> ext;
  for (const auto& y : outer)
    if (reach[padded.index(y)]) ext.push_back(y);
  return SiteSet(std::move(ext));
}

bool is_connected(const SiteSet& K, bool star) {
  if (K.size() <= 1) return true;
  std::vector<bool> seen(K.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const LatticePoint p = K[queue.front()];
    queue.pop_front();
    for (const auto& q : neighbors(p, star)) {
      const long j = K.index_of(q);
      if (j < 0 || seen[static_cast<std::size_t>(j)]) continue;
      seen[static_cast<std::size_t>(j)] = true;
      ++reached;
      queue.push_back(static_cast<std::size_t>(j));
    }
  }
  return reached == K.size();
}

Window::Window(LatticePoint lo, LatticePoint hi, WindowShape shape, int slab_n)
    : lo_(lo), hi_(hi), shape_(shape), slab_n_(slab_n) {
  if (lo.dim() != hi.dim() || lo.dim() == 0) throw ConfigError("window bounds have mismatched dimension");
  std::size_t n = 1;
  for (int i = 0; i < lo.dim(); ++i) {
    if (lo[i] > hi[i]) throw ConfigError("window bound lo > hi on axis " + std::to_string(i));
    const auto ext = static_cast<std::size_t>(hi[i] - lo[i] + 1);
    if (n > (std::size_t{1} << 40) / ext) throw ConfigError("window too large");
    n *= ext;
  }
  size_ = n;
  std::size_t s = 1;
  for (int i = lo.dim() - 1; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] = s;
    s *= static_cast<std::size_t>(extent(i));
  }
}

Window Window::box(int d, int radius) {
  if (radius < 0) throw ConfigError("window radius must be nonnegative");
  LatticePoint lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -radius;
    hi[i] = radius;
  }
  return Window(lo, hi);
}

Window Window::slab(int d, int n) {
  if (d < 3) throw ConfigError("slab windows need d >= 3");
  if (n < 0) throw ConfigError("slab size must be nonnegative");
  LatticePoint lo(d), hi(d);
  for (int i = 0; i < 3; ++i) {
    lo[i] = -2 * n;
    hi[i] = 2 * n + 1;
  }
  for (int i = 3; i < d; ++i) hi[i] = 1;
  return Window(lo, hi, WindowShape::slab, n);
}

LatticePoint Window::site(std::size_t index) const noexcept {
  LatticePoint p = lo_;
  for (int i = dim() - 1; i >= 0; --i) {
    const auto ext = static_cast<std::size_t>(extent(i));
    p[i] = lo_[i] + static_cast<int>(index % ext);
    index /= ext;
  }
  return p;
}

double Window::radius_l2() const noexcept {
  double s = 0;
  for (int i = 0; i < dim(); ++i) {
    const double m = std::max(std::abs(lo_[i]), std::abs(hi_[i]));
    s += m * m;
  }
  return std::sqrt(s);
}

SiteSet Window::sites() const {
  std::vector<LatticePoint> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(site(i));
  return SiteSet(std::move(out));
}

BitField::BitField(Window window, bool value) : window_(std::move(window)), words_((window_.size() + 63) / 64, 0) {
  fill(value);
}

void BitField::fill(bool v) noexcept {
  std::fill(words_.begin(), words_.end(), v ? ~std::uint64_t{0} : 0);
  clear_padding();
}

void BitField::clear_padding() noexcept {
  const std::size_t rem = window_.size() & 63;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

std::size_t BitField::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitField BitField::complement() const {
  BitField out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

bool BitField::is_subset_of(const BitField& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

}  // namespace interlace
