#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "interlace/green.hpp"
#include "interlace/lattice.hpp"
#include "interlace/parallel.hpp"
#include "interlace/potential.hpp"
#include "interlace/rng.hpp"

namespace interlace {

struct SamplerMode {
  enum class Kind : std::uint8_t { truncate = 0, exact = 1 };
  Kind kind = Kind::exact;
  double radius = 0;  // truncate: walks are killed on leaving B_2(0, radius)

  static SamplerMode exact() { return {Kind::exact, 0.0}; }
  static SamplerMode truncate(double radius) { return {Kind::truncate, radius}; }
  // "exact" or "truncate:R"
  static SamplerMode parse(const std::string& text);
  std::string str() const;

  friend bool operator==(const SamplerMode&, const SamplerMode&) = default;
};

// Part of one interlacement trajectory seen inside the window: the forward
// walk from its first entrance, recorded as window site indices in visiting
// order. The backward half never meets the window and is not simulated.
struct Trajectory {
  double label = 0;             // u_i ~ U(0, u_max); kept at level u iff label <= u
  std::uint32_t entries = 0;    // number of entrances into the window
  std::vector<std::uint32_t> trace;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct InterlacementSample {
  double u = 0;
  double u_max = 0;
  Window window;
  SamplerMode mode;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<Trajectory> trajectories;
  BitField occupancy;  // I^u restricted to the window
  BitField vacant;     // window minus occupancy

  friend bool operator==(const InterlacementSample&, const InterlacementSample&) = default;
};

struct SamplerOptions {
  // Exact mode keeps every exit->entrance row in memory if
  // (#outer boundary sites) x (#interior boundary sites) fits this many
  // doubles; otherwise rows are computed on demand into an LRU cache.
  std::size_t kernel_budget = std::size_t{48} << 20;
  std::size_t cache_rows = 4096;
  std::uint64_t max_steps = 4'000'000'000ull;
};

// Exact sampler of I^u intersected with a finite window W.
//
// N ~ Poisson(u_max cap(W)) trajectories start from e_W / cap(W) and run as
// simple random walks. Each time a walk leaves W to a site z:
//   exact:     with probability 1 - h(z) it never returns and stops; otherwise
//              it re-enters at x' with probability P_z[X_{H_W} = x'] / h(z),
//              which is the hitting distribution of the h-transformed walk
//              p(z, w) = h(w) / (2d h(z)). The trace in W is exact in law.
//   truncate:  the walk continues outside W and is killed on leaving
//              B_2(0, R); returns after that are missed.
class InterlacementSampler {
 public:
  InterlacementSampler(Window window, const GreenTable& green, SamplerMode mode, SamplerOptions options = {});
  ~InterlacementSampler();

  const Window& window() const noexcept { return window_; }
  const GreenTable& green() const noexcept { return *green_; }
  const EquilibriumMeasure& equilibrium() const noexcept { return equilibrium_; }
  double capacity() const noexcept { return equilibrium_.capacity; }
  SamplerMode mode() const noexcept { return mode_; }
  bool kernel_in_memory() const noexcept { return !kernel_.empty(); }

  InterlacementSample sample(double u_max, std::uint64_t seed, std::uint64_t stream) const;

  // h(z) = P_z[H_W < inf] for z outside W within Green coverage.
  double hit_probability(const LatticePoint& z) const;

  // Transition probabilities h(w) / (2d h(z)) of the h-transformed walk from
  // z outside W to its 2d neighbors (same order as neighbors(z, false)).
  std::vector<double> htransform_row(const LatticePoint& z) const;

  // Truncate mode: max of h(z) over probe points with |z|_2 = R, using the
  // leading-order Green asymptotics (the table does not reach radius R).
  double truncation_bias_bound() const;

 private:
  struct KernelRow {
    double h = 0;
    std::vector<double> cumulative;  // prefix sums over interior-boundary sites
  };

  std::shared_ptr<const KernelRow> lazy_row(std::size_t outer_id) const;
  std::size_t padded_index(const LatticePoint& z) const noexcept;

  Window window_;
  Window padded_;
  const GreenTable* green_;
  SamplerMode mode_;
  SamplerOptions options_;
  std::unique_ptr<BoundarySolver> solver_;
  EquilibriumMeasure equilibrium_;

  std::vector<std::uint32_t> boundary_index_;  // interior boundary -> window index
  std::vector<double> start_cumulative_;       // over interior boundary, normalized
  std::vector<LatticePoint> outer_;            // outer boundary of W
  std::vector<std::int32_t> outer_id_;         // padded index -> outer id or -1

  std::vector<double> kernel_h_;
  std::vector<double> kernel_;  // outer x boundary, row-wise cumulative

  mutable std::mutex cache_mutex_;
  mutable std::list<std::size_t> lru_;
  mutable std::unordered_map<std::size_t, std::pair<std::shared_ptr<const KernelRow>, std::list<std::size_t>::iterator>>
      cache_;
};

// Keeps trajectories with label <= u and recomputes the fields.
InterlacementSample thin(const InterlacementSample& sample, double u);

// Union of the traces of trajectories with label <= u.
BitField occupancy_of(const InterlacementSample& sample, double u);

// Runs fn(replica, sample) for replicas 0..n-1 with stream id = replica.
template <class Fn>
void for_each_replica(const InterlacementSampler& sampler, double u_max, std::size_t replicas, std::uint64_t seed,
                      int threads, Fn&& fn) {
  parallel_for(replicas, threads, [&](std::size_t r) {
    const auto s = sampler.sample(u_max, seed, r);
    fn(r, s);
  });
}

struct VacancyReport {
  double u = 0;
  double capacity = 0;
  double target = 0;     // exp(-u cap(K))
  double empirical = 0;  // fraction of replicas with K vacant
  double std_error = 0;
  double z_score = 0;
  std::size_t replicas = 0;
};

// Compares the empirical P[K vacant at level u] with exp(-u cap(K)).
VacancyReport vacancy_probability_check(const InterlacementSampler& sampler, const SiteSet& K, double u,
                                        std::size_t replicas, std::uint64_t seed, int threads);

}  // namespace interlace
