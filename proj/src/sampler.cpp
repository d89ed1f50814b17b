#include "interlace/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "interlace/error.hpp"
#include "interlace/stats.hpp"
#include "interlace/walk.hpp"

namespace interlace {

SamplerMode SamplerMode::parse(const std::string& text) {
  if (text == "exact") return exact();
  if (text.rfind("truncate:", 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string num = text.substr(9);
      const double r = std::stod(num, &used);
      if (used == num.size() && r > 0) return truncate(r);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("invalid mode '" + text + "' (expected exact or truncate:R)");
}

std::string SamplerMode::str() const {
  if (kind == Kind::exact) return "exact";
  std::ostringstream os;
  os << "truncate:" << radius;
  return os.str();
}

namespace {

Window pad(const Window& w) {
  LatticePoint lo = w.lo(), hi = w.hi();
  for (int i = 0; i < w.dim(); ++i) {
    lo[i] -= 1;
    hi[i] += 1;
  }
  return Window(lo, hi);
}

// First index with cumulative[i] > t.
std::size_t search(const double* cumulative, std::size_t n, double t) {
  const double* it = std::upper_bound(cumulative, cumulative + n, t);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative), n - 1);
}

}  // namespace

InterlacementSampler::InterlacementSampler(Window window, const GreenTable& green, SamplerMode mode,
                                           SamplerOptions options)
    : window_(std::move(window)), padded_(pad(window_)), green_(&green), mode_(mode), options_(options) {
  if (window_.dim() != green.dim()) throw ConfigError("window and Green table dimensions differ");
  if (window_.size() >= (std::size_t{1} << 32)) throw ConfigError("window too large for 32-bit site indices");
  if (mode_.kind == SamplerMode::Kind::truncate && !(mode_.radius > window_.radius_l2()))
    throw ConfigError("truncate radius must exceed the window radius " + std::to_string(window_.radius_l2()));

  solver_ = std::make_unique<BoundarySolver>(window_.sites(), green);
  equilibrium_ = solver_->equilibrium();

  const auto& bnd = solver_->boundary();
  boundary_index_.reserve(bnd.size());
  start_cumulative_.reserve(bnd.size());
  double acc = 0;
  for (const auto& b : bnd) {
    boundary_index_.push_back(static_cast<std::uint32_t>(window_.index(b)));
    acc += equilibrium_.weight(b);
    start_cumulative_.push_back(acc);
  }
  for (double& c : start_cumulative_) c /= acc;

  if (mode_.kind != SamplerMode::Kind::exact) return;

  outer_ = boundary(window_.sites(), BoundaryKind::outer).sites();
  outer_id_.assign(padded_.size(), -1);
  for (std::size_t i = 0; i < outer_.size(); ++i) outer_id_[padded_.index(outer_[i])] = static_cast<std::int32_t>(i);

  const std::size_t nb = bnd.size();
  if (outer_.size() * nb > options_.kernel_budget) return;
  kernel_.resize(outer_.size() * nb);
  kernel_h_.resize(outer_.size());
  constexpr std::size_t batch = 512;
  for (std::size_t start = 0; start < outer_.size(); start += batch) {
    const std::size_t stop = std::min(outer_.size(), start + batch);
    const std::span<const LatticePoint> zs(outer_.data() + start, stop - start);
    const Eigen::MatrixXd rows = solver_->entrance_matrix(zs);
    for (std::size_t r = 0; r < zs.size(); ++r) {
      double* out = &kernel_[(start + r) * nb];
      double s = 0;
      for (std::size_t j = 0; j < nb; ++j) {
        s += rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
        out[j] = s;
      }
      if (s > 1.0 + 1e-8) throw NumericError("return probability exceeds one at " + zs[r].str());
      kernel_h_[start + r] = s;
    }
  }
}

InterlacementSampler::~InterlacementSampler() = default;

std::size_t InterlacementSampler::padded_index(const LatticePoint& z) const noexcept { return padded_.index(z); }

std::shared_ptr<const InterlacementSampler::KernelRow> InterlacementSampler::lazy_row(std::size_t outer_id) const {
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(outer_id);
    if (it != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
  }
  auto row = std::make_shared<KernelRow>();
  const auto a = solver_->entrance_distribution(outer_[outer_id]);
  row->cumulative.resize(a.size());
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    s += a[j];
    row->cumulative[j] = s;
  }
  if (s > 1.0 + 1e-8) throw NumericError("return probability exceeds one at " + outer_[outer_id].str());
  row->h = s;

  std::lock_guard lock(cache_mutex_);
  auto it = cache_.find(outer_id);
  if (it != cache_.end()) return it->second.first;
  lru_.push_front(outer_id);
  cache_.emplace(outer_id, std::make_pair(std::shared_ptr<const KernelRow>(row), lru_.begin()));
  while (cache_.size() > std::max<std::size_t>(1, options_.cache_rows)) {
    cache_.erase(lru_.back());
    lru_.pop_back();
  }
  return row;
}

InterlacementSample InterlacementSampler::sample(double u_max, std::uint64_t seed, std::uint64_t stream) const {
  if (!(u_max >= 0) || !std::isfinite(u_max)) throw ConfigError("intensity must be a finite nonnegative number");
  InterlacementSample out;
  out.u = out.u_max = u_max;
  out.window = window_;
  out.mode = mode_;
  out.seed = seed;
  out.stream = stream;
  out.occupancy = BitField(window_, false);

  Philox rng(seed, stream);
  const double mean = u_max * capacity();
  if (mean > 1e9) throw NumericError("Poisson mean too large for the trajectory count");
  std::uint64_t count = 0;
  if (mean > 0) count = std::poisson_distribution<std::uint64_t>(mean)(rng);

  const int d = window_.dim();
  const std::size_t nb = boundary_index_.size();
  const double r2 = mode_.radius * mode_.radius;
  out.trajectories.reserve(count);

  for (std::uint64_t t = 0; t < count; ++t) {
    Trajectory traj;
    traj.label = u_max * rng.uniform();
    std::size_t b = search(start_cumulative_.data(), nb, rng.uniform());
    std::size_t idx = boundary_index_[b];
    LatticePoint x = window_.site(idx);
    traj.entries = 1;
    traj.trace.push_back(static_cast<std::uint32_t>(idx));
    std::uint64_t steps = 0;
    for (;;) {
      if (++steps > options_.max_steps) throw NumericError("walk exhausted max_steps inside the sampler");
      const auto dir = rng.below(static_cast<std::uint32_t>(2 * d));
      const int axis = static_cast<int>(dir >> 1);
      const int sgn = (dir & 1u) ? 1 : -1;
      x[axis] += sgn;
      if (x[axis] >= window_.lo()[axis] && x[axis] <= window_.hi()[axis]) {
        idx = sgn > 0 ? idx + window_.stride(axis) : idx - window_.stride(axis);
        traj.trace.push_back(static_cast<std::uint32_t>(idx));
        continue;
      }
      if (mode_.kind == SamplerMode::Kind::exact) {
        const auto oid = static_cast<std::size_t>(outer_id_[padded_index(x)]);
        const double* cum = nullptr;
        double h = 0;
        std::shared_ptr<const KernelRow> holder;
        if (!kernel_.empty()) {
          cum = &kernel_[oid * nb];
          h = kernel_h_[oid];
        } else {
          holder = lazy_row(oid);
          cum = holder->cumulative.data();
          h = holder->h;
        }
        const double v = rng.uniform();
        if (v >= h) break;  // escapes to infinity
        b = search(cum, nb, v);
      } else {
        // Plain walk outside W until re-entry or exit from B_2(0, R).
        bool killed = false;
        for (;;) {
          double n2 = 0;
          for (int i = 0; i < d; ++i) n2 += static_cast<double>(x[i]) * x[i];
          if (n2 > r2) {
            killed = true;
            break;
          }
          if (++steps > options_.max_steps) throw NumericError("walk exhausted max_steps inside the sampler");
          x = random_step(x, rng);
          if (window_.contains(x)) break;
        }
        if (killed) break;
        idx = window_.index(x);
        traj.entries += 1;
        traj.trace.push_back(static_cast<std::uint32_t>(idx));
        continue;
      }
      idx = boundary_index_[b];
      x = window_.site(idx);
      traj.entries += 1;
      traj.trace.push_back(static_cast<std::uint32_t>(idx));
    }
    for (auto i : traj.trace) out.occupancy.set(i, true);
    out.trajectories.push_back(std::move(traj));
  }
  out.vacant = out.occupancy.complement();
  return out;
}

double InterlacementSampler::hit_probability(const LatticePoint& z) const {
  return interlace::hit_probability(z, equilibrium_, *green_);
}

std::vector<double> InterlacementSampler::htransform_row(const LatticePoint& z) const {
  if (window_.contains(z)) throw ConfigError("h-transform rows are defined off the window only");
  const double hz = hit_probability(z);
  if (!(hz > 0)) throw NumericError("h(z) = 0 at " + z.str());
  const auto nbrs = neighbors(z, false);
  std::vector<double> row;
  row.reserve(nbrs.size());
  for (const auto& w : nbrs) row.push_back(hit_probability(w) / (static_cast<double>(nbrs.size()) * hz));
  return row;
}

double InterlacementSampler::truncation_bias_bound() const {
  if (mode_.kind != SamplerMode::Kind::truncate) return 0.0;
  const int d = window_.dim();
  const double R = mode_.radius;
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < d; ++i) {
    for (int s : {-1, 1}) {
      std::vector<double> v(static_cast<std::size_t>(d), 0.0);
      v[static_cast<std::size_t>(i)] = s;
      dirs.push_back(v);
    }
  }
  for (unsigned bits = 0; bits < (1u << d); ++bits) {
    std::vector<double> v(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = ((bits >> i) & 1u ? 1.0 : -1.0) / std::sqrt(double(d));
    dirs.push_back(v);
  }
  Philox rng(0xB1A5, 0);
  for (int k = 0; k < 256; ++k) {
    std::vector<double> v(static_cast<std::size_t>(d));
    double n = 0;
    std::normal_distribution<double> gauss;
    for (auto& c : v) {
      c = gauss(rng);
      n += c * c;
    }
    for (auto& c : v) c /= std::sqrt(n);
    dirs.push_back(v);
  }
  double best = 0;
  for (const auto& v : dirs) {
    double h = 0;
    for (std::size_t i = 0; i < equilibrium_.support.size(); ++i) {
      const double w = equilibrium_.weights[i];
      if (w == 0.0) continue;
      const auto& y = equilibrium_.support[i];
      double r2 = 0;
      for (int a = 0; a < d; ++a) {
        const double diff = R * v[static_cast<std::size_t>(a)] - y[a];
        r2 += diff * diff;
      }
      h += w * green_asymptotic(d, std::sqrt(r2));
    }
    best = std::max(best, h);
  }
  return best;
}

BitField occupancy_of(const InterlacementSample& sample, double u) {
  BitField occ(sample.window, false);
  for (const auto& t : sample.trajectories)
    if (t.label <= u)
      for (auto i : t.trace) occ.set(i, true);
  return occ;
}

InterlacementSample thin(const InterlacementSample& sample, double u) {
  if (!(u >= 0)) throw ConfigError("thinning level must be nonnegative");
  if (u > sample.u_max) throw ConfigError("cannot thin above u_max");
  InterlacementSample out;
  out.u = u;
  out.u_max = sample.u_max;
  out.window = sample.window;
  out.mode = sample.mode;
  out.seed = sample.seed;
  out.stream = sample.stream;
  for (const auto& t : sample.trajectories)
    if (t.label <= u) out.trajectories.push_back(t);
  out.occupancy = occupancy_of(out, u);
  out.vacant = out.occupancy.complement();
  return out;
}

VacancyReport vacancy_probability_check(const InterlacementSampler& sampler, const SiteSet& K, double u,
                                        std::size_t replicas, std::uint64_t seed, int threads) {
  for (const auto& x : K)
    if (!sampler.window().contains(x)) throw ConfigError("vacancy check set leaves the window at " + x.str());
  VacancyReport rep;
  rep.u = u;
  rep.replicas = replicas;
  rep.capacity = equilibrium_exact(K, sampler.green()).capacity;
  rep.target = std::exp(-u * rep.capacity);
  std::vector<char> vacant(replicas, 0);
  for_each_replica(sampler, u, replicas, seed, threads, [&](std::size_t r, const InterlacementSample& s) {
    bool all = true;
    for (const auto& x : K) all = all && s.vacant.at(x);
    vacant[r] = all;
  });
  RunningStats st;
  for (char v : vacant) st.add(v ? 1.0 : 0.0);
  rep.empirical = st.mean();
  const double p = rep.target;
  rep.std_error = std::sqrt(p * (1 - p) / static_cast<double>(std::max<std::size_t>(1, replicas)));
  rep.z_score = rep.std_error > 0 ? (rep.empirical - rep.target) / rep.std_error : 0.0;
  return rep;
}

}  // namespace interlace
