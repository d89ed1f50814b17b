#include "interlace/snapshot.hpp"

#include "interlace/binary_io.hpp"
#include "interlace/error.hpp"

namespace interlace {

namespace {

void put_bits(binio::Writer& w, const BitField& f) {
  const std::size_t n = f.size();
  w.u64(n);
  const std::size_t nbytes = (n + 7) / 8;
  for (std::size_t b = 0; b < nbytes; ++b) w.u8(static_cast<std::uint8_t>((f.words()[b / 8] >> (8 * (b % 8))) & 0xFFu));
}

BitField get_bits(binio::Reader& r, const Window& window) {
  const std::uint64_t n = r.u64();
  if (n != window.size()) throw IoError("bit-field size does not match its window");
  BitField f(window, false);
  const std::size_t nbytes = (n + 7) / 8;
  for (std::size_t b = 0; b < nbytes; ++b) f.words()[b / 8] |= std::uint64_t{r.u8()} << (8 * (b % 8));
  // Padding bits past the window must be zero.
  if (n % 64 != 0 && (f.words().back() >> (n % 64)) != 0) throw IoError("nonzero padding in bit-field");
  return f;
}

void put_window(binio::Writer& w, const Window& win) {
  for (int i = 0; i < win.dim(); ++i) w.i32(win.lo()[i]);
  for (int i = 0; i < win.dim(); ++i) w.i32(win.hi()[i]);
}

WindowShape get_shape(std::uint8_t v) {
  if (v > 1) throw IoError("unknown window shape tag");
  return static_cast<WindowShape>(v);
}

struct Header {
  std::string tag;
  int d = 0, ambient = 0;
  Window window;
  std::uint8_t mode = 0;
  double u = 0, u_max = 0, radius = 0;
  std::uint64_t seed = 0, stream = 0;
};

void put_header(binio::Writer& w, const std::string& tag, int ambient, const Window& win, std::uint8_t mode, double u,
                double u_max, double radius, std::uint64_t seed, std::uint64_t stream) {
  w.bytes("RILC");
  w.u32(kSnapshotVersion);
  w.bytes(tag);
  w.u32(static_cast<std::uint32_t>(win.dim()));
  w.u32(static_cast<std::uint32_t>(ambient));
  put_window(w, win);
  w.u8(static_cast<std::uint8_t>(win.shape()));
  w.u8(mode);
  w.u16(0);
  w.i32(win.slab_n());
  w.f64(u);
  w.f64(u_max);
  w.f64(radius);
  w.u64(seed);
  w.u64(stream);
}

Header get_header(binio::Reader& r, const std::string& want) {
  if (r.bytes(4) != "RILC") throw IoError("not a RILC snapshot");
  if (r.u32() != kSnapshotVersion) throw IoError("snapshot version mismatch");
  Header h;
  h.tag = r.bytes(4);
  if (h.tag != want) throw IoError("snapshot section is '" + h.tag + "', expected '" + want + "'");
  h.d = static_cast<int>(r.u32());
  h.ambient = static_cast<int>(r.u32());
  if (h.d < 1 || h.d > kMaxDim || h.ambient < 1 || h.ambient > kMaxDim) throw IoError("snapshot dimension out of range");
  LatticePoint lo(h.d), hi(h.d);
  for (int i = 0; i < h.d; ++i) lo[i] = r.i32();
  for (int i = 0; i < h.d; ++i) hi[i] = r.i32();
  const WindowShape shape = get_shape(r.u8());
  h.mode = r.u8();
  r.u16();
  const int slab_n = r.i32();
  try {
    h.window = Window(lo, hi, shape, slab_n);
  } catch (const ConfigError& e) {
    throw IoError(std::string("corrupt snapshot window: ") + e.what());
  }
  h.u = r.f64();
  h.u_max = r.f64();
  h.radius = r.f64();
  h.seed = r.u64();
  h.stream = r.u64();
  return h;
}

}  // namespace

std::vector<char> encode_sample(const InterlacementSample& s, bool with_trajectories) {
  binio::Writer w;
  put_header(w, "SMPL", s.window.dim(), s.window, static_cast<std::uint8_t>(s.mode.kind), s.u, s.u_max, s.mode.radius,
             s.seed, s.stream);
  put_bits(w, s.vacant);
  w.u32(with_trajectories ? 1 : 0);
  if (with_trajectories) {
    w.u64(s.trajectories.size());
    for (const auto& t : s.trajectories) {
      w.f64(t.label);
      w.u32(t.entries);
      w.u64(t.trace.size());
      for (auto i : t.trace) w.u32(i);
    }
  }
  binio::append_crc(w);
  return std::move(w.data());
}

InterlacementSample decode_sample(const std::vector<char>& bytes) {
  const std::size_t payload = binio::check_crc(bytes, "sample snapshot");
  binio::Reader r(bytes, payload);
  const Header h = get_header(r, "SMPL");
  if (h.mode > 1) throw IoError("unknown sampler mode tag");
  InterlacementSample s;
  s.window = h.window;
  s.mode = {static_cast<SamplerMode::Kind>(h.mode), h.radius};
  s.u = h.u;
  s.u_max = h.u_max;
  s.seed = h.seed;
  s.stream = h.stream;
  s.vacant = get_bits(r, s.window);
  s.occupancy = s.vacant.complement();
  const std::uint32_t has = r.u32();
  if (has > 1) throw IoError("bad trajectory flag");
  if (has) {
    const std::uint64_t count = r.u64();
    for (std::uint64_t k = 0; k < count; ++k) {
      Trajectory t;
      t.label = r.f64();
      t.entries = r.u32();
      const std::uint64_t len = r.u64();
      if (len > payload) throw IoError("trajectory length exceeds the file");
      t.trace.resize(len);
      for (auto& i : t.trace) {
        i = r.u32();
        if (i >= s.window.size()) throw IoError("trajectory site index out of the window");
      }
      s.trajectories.push_back(std::move(t));
    }
  }
  if (!r.at_end()) throw IoError("trailing bytes in sample snapshot");
  return s;
}

void save_sample(const std::filesystem::path& path, const InterlacementSample& s, bool with_trajectories) {
  binio::write_file(path, encode_sample(s, with_trajectories));
}

InterlacementSample load_sample(const std::filesystem::path& path) {
  try {
    return decode_sample(binio::read_file(path));
  } catch (const IoError& e) {
    throw IoError(std::string(e.what()) + " (" + path.string() + ")");
  }
}

std::vector<char> encode_goodness(const GoodnessSnapshot& g) {
  const auto& f = g.field;
  binio::Writer w;
  put_header(w, "GOOD", f.ambient_dim(), f.window(), 0, f.u(), f.u(), 0.0, g.seed, g.stream);
  put_bits(w, f.good());
  const Window& vw = f.vacant().window();
  put_window(w, vw);
  w.u8(static_cast<std::uint8_t>(vw.shape()));
  w.i32(vw.slab_n());
  put_bits(w, f.vacant());
  w.u64(f.anchors().size());
  for (const auto& a : f.anchors())
    for (auto v : a) w.u32(v);
  binio::append_crc(w);
  return std::move(w.data());
}

GoodnessSnapshot decode_goodness(const std::vector<char>& bytes) {
  const std::size_t payload = binio::check_crc(bytes, "goodness snapshot");
  binio::Reader r(bytes, payload);
  const Header h = get_header(r, "GOOD");
  if (h.d != 3) throw IoError("goodness snapshots carry a Z^3 window");
  BitField good = get_bits(r, h.window);
  LatticePoint lo(h.ambient), hi(h.ambient);
  for (int i = 0; i < h.ambient; ++i) lo[i] = r.i32();
  for (int i = 0; i < h.ambient; ++i) hi[i] = r.i32();
  const WindowShape shape = get_shape(r.u8());
  const int slab_n = r.i32();
  Window vw;
  try {
    vw = Window(lo, hi, shape, slab_n);
  } catch (const ConfigError& e) {
    throw IoError(std::string("corrupt vacant window: ") + e.what());
  }
  auto vacant = std::make_shared<const BitField>(get_bits(r, vw));
  const std::uint64_t count = r.u64();
  if (count != good.size()) throw IoError("anchor count does not match the goodness window");
  std::vector<std::array<std::uint32_t, kCubeCount>> anchors(count);
  for (auto& a : anchors)
    for (auto& v : a) v = r.u32();
  if (!r.at_end()) throw IoError("trailing bytes in goodness snapshot");
  GoodnessSnapshot g;
  try {
    g.field = GoodnessField(std::move(vacant), h.u, std::move(good), std::move(anchors));
  } catch (const ConfigError& e) {
    throw IoError(std::string("corrupt goodness snapshot: ") + e.what());
  } catch (const CoverageError& e) {
    throw IoError(std::string("corrupt goodness snapshot: ") + e.what());
  }
  g.seed = h.seed;
  g.stream = h.stream;
  return g;
}

void save_goodness(const std::filesystem::path& path, const GoodnessSnapshot& g) {
  binio::write_file(path, encode_goodness(g));
}

GoodnessSnapshot load_goodness(const std::filesystem::path& path) {
  try {
    return decode_goodness(binio::read_file(path));
  } catch (const IoError& e) {
    throw IoError(std::string(e.what()) + " (" + path.string() + ")");
  }
}

}  // namespace interlace
