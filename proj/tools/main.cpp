#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "interlace/binary_io.hpp"
#include "interlace/decoupling.hpp"
#include "interlace/error.hpp"
#include "interlace/goodness.hpp"
#include "interlace/green.hpp"
#include "interlace/parallel.hpp"
#include "interlace/rerouting.hpp"
#include "interlace/sampler.hpp"
#include "interlace/snapshot.hpp"
#include "interlace/transience.hpp"
#include "interlace/vacancy.hpp"
#include "json.hpp"
#include "output.hpp"

#ifndef INTERLACE_VERSION
#define INTERLACE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace interlace;
using namespace interlace::cli;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  int d = 3;
  double u = 1.0;
  std::string u_grid;
  int window = -1;
  int slab = -1;
  std::string mode = "exact";
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  std::string green_cache;
  std::string green_method = "quadrature";
  std::string out;
  std::string format = "ndjson";
  std::string input;
  int steps = 200;
  int paths = 16;
  std::string radii;
  bool trajectories = true;
  // decouple
  double l0 = 1e7, L0 = 3, lambda = 3, C1 = 10, c0 = 2, c1 = 2, c = 6, p0 = 0;
  int n_max = 30;
  std::size_t cutoff = std::size_t{1} << 16;
};

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof())
    throw ConfigError("u grid must look like lo:hi:step, got '" + spec + "'");
  if (!(step > 0) || hi < lo || lo < 0) throw ConfigError("u grid needs 0 <= lo <= hi and step > 0");
  std::vector<double> g;
  for (long k = 0;; ++k) {
    const double u = lo + static_cast<double>(k) * step;
    if (u > hi + 1e-9 * step) break;
    g.push_back(u);
    if (g.size() > 100000) throw ConfigError("u grid has too many points");
  }
  return g;
}

std::vector<int> parse_radii(const std::string& spec, int default_hi) {
  if (spec.empty()) {
    std::vector<int> r;
    for (int n = 1; n <= default_hi; ++n) r.push_back(n);
    return r;
  }
  int lo = 0, hi = 0;
  char c = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c >> hi) || c != ':' || !is.eof() || lo < 1 || hi < lo)
    throw ConfigError("radii must look like lo:hi with 1 <= lo <= hi, got '" + spec + "'");
  std::vector<int> r;
  for (int n = lo; n <= hi; ++n) r.push_back(n);
  return r;
}

// Shared state of one command invocation: options, output sinks, manifest.
class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), o_(o) {
    if (o_.d < 3 || o_.d > kMaxDim) throw ConfigError("--d must lie in [3, " + std::to_string(kMaxDim) + "]");
    if (o_.replicas < 1) throw ConfigError("--replicas must be positive");
    if (!(o_.u >= 0) || !std::isfinite(o_.u)) throw ConfigError("--u must be a finite nonnegative number");
    config_ = resolved_config();
    hash_ = fnv1a_hex(config_.dump());
    emitter_ = std::make_unique<Emitter>(parse_format(o_.format), hash_);
    emitter_->add_sink(std::cout);
    if (!o_.out.empty()) {
      std::error_code ec;
      fs::create_directories(o_.out, ec);
      if (ec) throw IoError("cannot create output directory " + o_.out + ": " + ec.message());
      const std::string name = "results." + std::string(o_.format == "csv" ? "csv" : "ndjson");
      results_.open(fs::path(o_.out) / name, std::ios::binary | std::ios::trunc);
      if (!results_) throw IoError("cannot write " + (fs::path(o_.out) / name).string());
      emitter_->add_sink(results_);
      artifacts_.push_back(name);
    }
  }

  const Options& opt() const { return o_; }
  int threads() const { return thread_count(); }
  bool has_out() const { return !o_.out.empty(); }
  fs::path out_path(const std::string& name) {
    artifacts_.push_back(name);
    return fs::path(o_.out) / name;
  }
  void emit(const Row& r) { emitter_->emit(r); }

  Window window(int default_box, int default_slab) const {
    if (o_.window >= 0 && o_.slab >= 0) throw ConfigError("--window and --slab are mutually exclusive");
    if (o_.slab >= 0) return Window::slab(o_.d, o_.slab);
    if (o_.window >= 0) return Window::box(o_.d, o_.window);
    if (default_slab >= 0) return Window::slab(o_.d, default_slab);
    return Window::box(o_.d, default_box);
  }

  // Green table covering every difference between sites of W and its outer boundary.
  const GreenTable& green_for(const Window& w) {
    int radius = 1;
    for (int a = 0; a < w.dim(); ++a) radius = std::max(radius, w.extent(a));
    return green(radius);
  }

  const GreenTable& green(int radius) {
    GreenMethod method;
    if (o_.green_method == "quadrature")
      method = GreenMethod::quadrature;
    else if (o_.green_method == "dirichlet")
      method = GreenMethod::dirichlet_solve;
    else
      throw ConfigError("unknown --green-method '" + o_.green_method + "'");
    if (o_.green_cache.empty()) {
      table_ = build_green_table(o_.d, radius, method);
    } else {
      std::error_code ec;
      fs::create_directories(o_.green_cache, ec);
      if (ec) throw IoError("cannot create Green cache directory " + o_.green_cache);
      const auto path = fs::path(o_.green_cache) / ("green_d" + std::to_string(o_.d) + "_" + o_.green_method + ".grnt");
      table_ = load_or_build_green_table(path, o_.d, radius, method);
    }
    green_info_ = {{"d", table_.dim()},
                   {"radius", table_.radius()},
                   {"method", o_.green_method},
                   {"tolerance", table_.tolerance()}};
    return table_;
  }

  void write_manifest() {
    if (!has_out()) return;
    ojson m;
    m["tool"] = "interlace";
    m["version"] = INTERLACE_VERSION;
    m["snapshot_format"] = kSnapshotVersion;
    m["command"] = command_;
    m["config"] = config_;
    m["config_hash"] = hash_;
    m["seed"] = o_.seed;
    if (!green_info_.is_null()) m["green_table"] = green_info_;
    m["artifacts"] = artifacts_;
    std::ofstream f(fs::path(o_.out) / "manifest.json", std::ios::binary | std::ios::trunc);
    f << m.dump(2) << "\n";
    if (!f) throw IoError("cannot write manifest.json");
  }

 private:
  ojson resolved_config() const {
    ojson c;
    c["command"] = command_;
    c["d"] = o_.d;
    c["u"] = o_.u;
    c["u_grid"] = o_.u_grid;
    c["window"] = o_.window;
    c["slab"] = o_.slab;
    c["mode"] = o_.mode;
    c["replicas"] = o_.replicas;
    c["seed"] = o_.seed;
    c["green_method"] = o_.green_method;
    c["format"] = o_.format;
    c["input"] = o_.input;
    c["steps"] = o_.steps;
    c["paths"] = o_.paths;
    c["radii"] = o_.radii;
    c["trajectories"] = o_.trajectories;
    c["l0"] = o_.l0;
    c["L0"] = o_.L0;
    c["lambda"] = o_.lambda;
    c["C1"] = o_.C1;
    c["c0"] = o_.c0;
    c["c1"] = o_.c1;
    c["c"] = o_.c;
    c["p0"] = o_.p0;
    c["n_max"] = o_.n_max;
    c["cutoff"] = o_.cutoff;
    return c;
  }

  std::string command_;
  Options o_;
  ojson config_;
  std::string hash_;
  std::unique_ptr<Emitter> emitter_;
  std::ofstream results_;
  std::vector<std::string> artifacts_;
  GreenTable table_;
  ojson green_info_;
};

std::string replica_name(const std::string& stem, std::size_t r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.rilc", stem.c_str(), r);
  return buf;
}

ojson site_list(const Path& p) {
  ojson a = ojson::array();
  for (const auto& x : p) {
    ojson s = ojson::array();
    for (int i = 0; i < x.dim(); ++i) s.push_back(x[i]);
    a.push_back(s);
  }
  return a;
}

// Walk stream ids stay clear of the sampler's replica streams.
constexpr std::uint64_t kWalkStreamBase = std::uint64_t{1} << 40;

void cmd_sample(Run& run) {
  const auto& o = run.opt();
  const Window w = run.window(6, -1);
  const InterlacementSampler sampler(w, run.green_for(w), SamplerMode::parse(o.mode));
  std::vector<InterlacementSample> samples(o.replicas);
  for_each_replica(sampler, o.u, o.replicas, o.seed, run.threads(),
                   [&](std::size_t r, const InterlacementSample& s) { samples[r] = s; });
  for (std::size_t r = 0; r < o.replicas; ++r) {
    const auto& s = samples[r];
    if (run.has_out()) save_sample(run.out_path(replica_name("sample", r)), s, o.trajectories);
    Row row;
    row.add("replica", r)
        .add("u", s.u)
        .add("capacity", sampler.capacity())
        .add("trajectories", s.trajectories.size())
        .add("occupied", s.occupancy.count())
        .add("vacant_fraction", double(s.vacant.count()) / double(w.size()));
    if (sampler.mode().kind == SamplerMode::Kind::truncate) row.add("bias_bound", sampler.truncation_bias_bound());
    run.emit(row);
  }
}

// Goodness fields per replica, from --input or fresh samples of a slab.
std::vector<GoodnessField> goodness_fields(Run& run, int default_slab) {
  const auto& o = run.opt();
  std::vector<GoodnessField> out;
  if (!o.input.empty()) {
    const auto s = load_sample(o.input);
    out.emplace_back(std::make_shared<const BitField>(s.vacant), s.u, run.threads());
    return out;
  }
  const Window w = run.window(-1, default_slab);
  const InterlacementSampler sampler(w, run.green_for(w), SamplerMode::parse(o.mode));
  out.resize(o.replicas);
  for (std::size_t r = 0; r < o.replicas; ++r) {
    const auto s = sampler.sample(o.u, o.seed, r);
    out[r] = GoodnessField(std::make_shared<const BitField>(s.vacant), o.u, run.threads());
  }
  return out;
}

void cmd_classify(Run& run) {
  const auto fields = goodness_fields(run, 2);
  for (std::size_t r = 0; r < fields.size(); ++r) {
    const auto& gf = fields[r];
    if (run.has_out()) save_goodness(run.out_path(replica_name("good", r)), {gf, run.opt().seed, r});
    const auto st = bad_clusters(gf);
    run.emit(Row()
                 .add("replica", r)
                 .add("u", gf.u())
                 .add("sites", gf.window().size())
                 .add("good", gf.good().count())
                 .add("good_fraction", double(gf.good().count()) / double(gf.window().size()))
                 .add("bad_clusters", st.sizes.size())
                 .add("max_bad_cluster", st.max_size));
  }
}

void cmd_scan(Run& run) {
  const auto& o = run.opt();
  const auto grid = parse_grid(o.u_grid.empty() ? "0:3:0.25" : o.u_grid);
  const Window w = run.window(6, -1);
  const InterlacementSampler sampler(w, run.green_for(w), SamplerMode::parse(o.mode));
  const auto res = scan_u(sampler, grid, o.replicas, o.seed, run.threads());
  for (const auto& row : res.rows)
    run.emit(Row()
                 .add("u", row.u)
                 .add("observable", to_string(row.observable))
                 .add("mean", row.mean)
                 .add("stderr", row.std_error)
                 .add("replicas", row.replicas)
                 .add("seed", row.seed));
}

Path good_walk(const GoodnessField& gf, const LatticePoint& root, int steps, Philox& rng) {
  Path p{root};
  for (int k = 0; k < steps; ++k) {
    const auto y = random_step(p.back(), rng);
    if (gf.contains(y) && gf.is_good(y)) p.push_back(y);
  }
  return loop_erase(p);
}

void cmd_reroute(Run& run) {
  const auto& o = run.opt();
  const auto fields = goodness_fields(run, 4);
  std::ofstream paths;
  if (run.has_out()) paths.open(run.out_path("paths.ndjson"), std::ios::binary | std::ios::trunc);
  for (std::size_t r = 0; r < fields.size(); ++r) {
    const auto& gf = fields[r];
    Philox rng(o.seed, kWalkStreamBase + r);
    Path pi{LatticePoint(3)};
    for (int k = 0; k < o.steps; ++k) {
      const auto y = random_step(pi.back(), rng);
      if (gf.contains(y)) pi.push_back(y);
    }
    const auto dec = decompose(pi, gf);
    Row row;
    row.add("replica", r).add("path_sites", pi.size()).add("excursions", dec.departures.size());
    Path out;
    try {
      out = reroute(pi, gf);
      bool all_good = true;
      for (const auto& y : out) all_good = all_good && gf.is_good(y);
      row.add("status", "ok").add("rerouted_sites", out.size()).add("simple", is_simple(out)).add("all_good", all_good);
    } catch (const NoWitnessError& e) {
      row.add("status", "no_witness").add("rerouted_sites", 0).add("simple", false).add("all_good", false);
    }
    run.emit(row);
    if (paths.is_open()) {
      ojson j;
      j["replica"] = r;
      j["input"] = site_list(pi);
      j["rerouted"] = site_list(out);
      paths << j.dump() << "\n";
    }
  }
}

void cmd_resistance(Run& run) {
  const auto& o = run.opt();
  const Window w = run.window(8, -1);
  const InterlacementSampler sampler(w, run.green_for(w), SamplerMode::parse(o.mode));
  int margin = 1 << 30;
  for (int a = 0; a < w.dim(); ++a) margin = std::min({margin, -w.lo()[a], w.hi()[a]});
  if (margin < 1) throw CoverageError("window too small: the origin needs a margin of at least 1");
  const auto radii = parse_radii(o.radii, margin);
  if (radii.back() > margin) throw CoverageError("window too small for radius " + std::to_string(radii.back()));
  const LatticePoint center(o.d);
  for (std::size_t r = 0; r < o.replicas; ++r) {
    const auto s = sampler.sample(o.u, o.seed, r);
    const auto lab = components(s.vacant, Adjacency::nearest);
    const auto id = lab.label[w.index(center)];
    if (id < 0) {
      for (int n : radii)
        run.emit(Row()
                     .add("replica", r)
                     .add("radius", n)
                     .add("resistance", std::numeric_limits<double>::infinity())
                     .add("cluster_sites", 0)
                     .add("status", "center_occupied"));
      continue;
    }
    std::vector<LatticePoint> cluster;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (lab.label[i] == id) cluster.push_back(w.site(i));
    const auto curve = effective_resistance(SiteSet(cluster), center, radii);
    for (std::size_t k = 0; k < radii.size(); ++k)
      run.emit(Row()
                   .add("replica", r)
                   .add("radius", radii[k])
                   .add("resistance", curve.resistance[k])
                   .add("cluster_sites", cluster.size())
                   .add("status", "ok"));
  }
}

void cmd_energy(Run& run) {
  const auto& o = run.opt();
  if (o.paths < 1) throw ConfigError("--paths must be positive");
  const auto fields = goodness_fields(run, 3);
  const LatticePoint root(3);
  for (std::size_t r = 0; r < fields.size(); ++r) {
    const auto& gf = fields[r];
    Row row;
    row.add("replica", r);
    if (!gf.contains(root) || !gf.is_good(root)) {
      row.add("status", "root_bad");
      run.emit(row);
      continue;
    }
    Philox rng(o.seed, kWalkStreamBase + r);
    PathMeasure pm;
    for (int k = 0; k < o.paths; ++k) {
      pm.paths.push_back(good_walk(gf, root, o.steps, rng));
      pm.weights.push_back(1.0 / o.paths);
    }
    double sum = 0;
    for (double x : pm.weights) sum += x;
    pm.weights.back() += 1.0 - sum;
    const auto rep = pushforward_energy_check(pm, gf);
    const auto st = st_bookkeeping(gf, root);
    row.add("status", "ok")
        .add("paths", o.paths)
        .add("energy", rep.original)
        .add("lifted_energy", rep.lifted)
        .add("ratio", rep.ratio)
        .add("factor", rep.factor)
        .add("holds", rep.holds)
        .add("S_sites", st.S.size())
        .add("sum_T", st.sum_T)
        .add("censored", st.censored);
    run.emit(row);
  }
}

void cmd_decouple(Run& run) {
  const auto& o = run.opt();
  ScaleParams p;
  p.d = o.d;
  p.l0 = o.l0;
  p.L0 = o.L0;
  p.lambda = o.lambda;
  p.C1 = o.C1;
  p.c0 = o.c0;
  p.c1 = o.c1;
  p.c = o.c;
  if (o.n_max < 0 || o.n_max > 1000) throw ConfigError("--n-max must lie in [0, 1000]");
  const auto f = sprinkle_factor(p, o.cutoff);
  for (int n = 0; n <= o.n_max; ++n) {
    const auto r = decoupling_rhs(p, o.u, o.p0, n, f);
    run.emit(Row()
                 .add("n", n)
                 .add("L_n", p.L(n))
                 .add("u", o.u)
                 .add("p0", o.p0)
                 .add("f", f.value)
                 .add("log_f_bound", f.tail_bound)
                 .add("u_minus", r.u_minus)
                 .add("epsilon", r.epsilon)
                 .add("log_rhs", r.log_rhs)
                 .add("log_target", r.log_target)
                 .add("below_target", r.below_target)
                 .add("planner_boundary", r.planner_boundary)
                 .add("planner_epsilon", r.planner_epsilon)
                 .add("l0_admissible", p.l0_admissible())
                 .add("L0_admissible", p.L0_admissible()));
  }
}

void cmd_stats(Run& run) {
  const auto& o = run.opt();
  if (!o.input.empty()) {
    const auto bytes = binio::read_file(o.input);
    const std::string tag = bytes.size() >= 12 ? std::string(bytes.data() + 8, 4) : std::string();
    if (tag == "GOOD") {
      const auto g = decode_goodness(bytes);
      const auto st = bad_clusters(g.field);
      run.emit(Row()
                   .add("section", "GOOD")
                   .add("d", g.field.ambient_dim())
                   .add("u", g.field.u())
                   .add("sites", g.field.window().size())
                   .add("good", g.field.good().count())
                   .add("bad_clusters", st.sizes.size())
                   .add("max_bad_cluster", st.max_size)
                   .add("seed", g.seed)
                   .add("stream", g.stream));
    } else {
      const auto s = decode_sample(bytes);
      run.emit(Row()
                   .add("section", "SMPL")
                   .add("d", s.window.dim())
                   .add("u", s.u)
                   .add("mode", s.mode.str())
                   .add("sites", s.window.size())
                   .add("vacant", s.vacant.count())
                   .add("trajectories", s.trajectories.size())
                   .add("largest_vacant_cluster", components(s.vacant, Adjacency::nearest).largest())
                   .add("seed", s.seed)
                   .add("stream", s.stream));
    }
    return;
  }
  const Window w = run.window(2, -1);
  const auto& g = run.green_for(w);
  const auto eq = equilibrium_exact(w.sites(), g);
  const LatticePoint o0(o.d);
  auto emit = [&](const std::string& q, double v) { run.emit(Row().add("quantity", q).add("value", v)); };
  emit("g(0)", g(o0));
  emit("g(e1)", g(LatticePoint::unit(o.d, 0)));
  emit("cap({0})", 1.0 / g(o0));
  emit("cap(W)", eq.capacity);
  emit("window_sites", double(w.size()));
  std::vector<int> radii;
  for (int L = 1; 2 * L <= std::min(g.radius(), 12); ++L) radii.push_back(L);
  if (radii.size() >= 2) {
    const auto sc = capacity_ball_scaling(o.d, radii, g);
    emit("ball_capacity_exponent", sc.exponent);
    emit("ball_capacity_prefactor", sc.prefactor);
  }
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--d", o.d, "Lattice dimension")->capture_default_str();
  app->add_option("--u", o.u, "Intensity level")->capture_default_str();
  app->add_option("--u-grid", o.u_grid, "Intensity grid lo:hi:step");
  app->add_option("--window", o.window, "Box window radius");
  app->add_option("--slab", o.slab, "Slab window size n");
  app->add_option("--mode", o.mode, "Sampler mode: exact or truncate:R")->capture_default_str();
  app->add_option("--replicas", o.replicas, "Number of replicas")->capture_default_str();
  app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app->add_option("--green-cache", o.green_cache, "Directory for cached Green tables");
  app->add_option("--green-method", o.green_method, "quadrature or dirichlet")->capture_default_str();
  app->add_option("--out", o.out, "Output directory for snapshots, results and the manifest");
  app->add_option("--format", o.format, "csv or ndjson")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random interlacements on Z^d: sampling, goodness, rerouting and transience diagnostics"};
  app.set_config("--config", "", "INI configuration file (flags take precedence)");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.require_subcommand(1);
  app.set_version_flag("--version", INTERLACE_VERSION);

  Options o;
  add_common(&app, o);
  std::string command;
  std::function<void(Run&)> action;
  auto sub = [&](const std::string& name, const std::string& help, void (*fn)(Run&)) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->footer("Shared options (--d, --u, --window, --seed, ...) are listed by 'interlace --help'.");
    s->callback([&command, &action, name, fn] {
      command = name;
      action = fn;
    });
    return s;
  };

  auto* sample = sub("sample", "Sample the interlacement set in a window", cmd_sample);
  sample->add_flag("!--no-trajectories", o.trajectories, "Omit trajectories from snapshots");
  auto* classify = sub("classify", "Classify Z^3 sites of a slab into good and bad", cmd_classify);
  classify->add_option("--input", o.input, "Sample snapshot to classify instead of sampling");
  sub("scan-u", "Scan vacant-set observables over an intensity grid", cmd_scan);
  auto* reroute = sub("reroute", "Reroute random Z^3 paths through the good set", cmd_reroute);
  reroute->add_option("--input", o.input, "Sample snapshot to use instead of sampling");
  reroute->add_option("--steps", o.steps, "Random walk steps")->capture_default_str();
  auto* resistance = sub("resistance", "Effective resistance of the vacant cluster of the origin", cmd_resistance);
  resistance->add_option("--radii", o.radii, "Radii lo:hi (default 1 up to the window margin)");
  auto* energy = sub("energy", "Path-measure energy and its lift", cmd_energy);
  energy->add_option("--input", o.input, "Sample snapshot to use instead of sampling");
  energy->add_option("--steps", o.steps, "Random walk steps per path")->capture_default_str();
  energy->add_option("--paths", o.paths, "Paths in the measure")->capture_default_str();
  auto* decouple = sub("decouple", "Evaluate the sprinkling factor and decoupling bound", cmd_decouple);
  decouple->add_option("--l0", o.l0, "Scale ratio l0")->capture_default_str();
  decouple->add_option("--L0", o.L0, "Base scale L0")->capture_default_str();
  decouple->add_option("--lambda", o.lambda, "Cascade complexity")->capture_default_str();
  decouple->add_option("--C1", o.C1, "Constant C1")->capture_default_str();
  decouple->add_option("--c0", o.c0, "Constant c0")->capture_default_str();
  decouple->add_option("--c1", o.c1, "Constant c1")->capture_default_str();
  decouple->add_option("--c", o.c, "Boundary-count constant c")->capture_default_str();
  decouple->add_option("--p0", o.p0, "Seed probability p0")->capture_default_str();
  decouple->add_option("--n-max", o.n_max, "Largest scale index")->capture_default_str();
  decouple->add_option("--cutoff", o.cutoff, "Direct-sum cutoff of the sprinkling product")->capture_default_str();
  auto* stats = sub("stats", "Potential-theory summary, or a summary of a snapshot", cmd_stats);
  stats->add_option("--input", o.input, "Snapshot file to summarize");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::config);
  }

  try {
    Run run(command, o);
    action(run);
    run.write_manifest();
  } catch (const Error& e) {
    std::cerr << "interlace: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "interlace: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io);
  } catch (const std::exception& e) {
    std::cerr << "interlace: " << e.what() << "\n";
    return static_cast<int>(ExitCode::numeric);
  }
  return 0;
}
