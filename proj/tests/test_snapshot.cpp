#include <cstring>
#include <filesystem>
#include <memory>

#include "doctest.h"
#include "interlace/binary_io.hpp"
#include "interlace/error.hpp"
#include "interlace/snapshot.hpp"
#include "support.hpp"

using namespace interlace;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("interlace_test_" + name);
}

std::uint32_t le32(const std::vector<char>& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(b[at + std::size_t(i)])) << (8 * i);
  return v;
}

}  // namespace

TEST_CASE("sample snapshot round trip") {
  const InterlacementSampler s(Window::box(3, 3), testing::green(3, 16), SamplerMode::exact());
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto smp = s.sample(1.5, 123, r);
    CHECK(decode_sample(encode_sample(smp)) == smp);
    auto bare = decode_sample(encode_sample(smp, false));
    CHECK(bare.vacant == smp.vacant);
    CHECK(bare.trajectories.empty());
  }
  const auto smp = s.sample(0.0, 1, 0);
  const auto path = temp_file("sample.rilc");
  save_sample(path, smp);
  const auto back = load_sample(path);
  CHECK(back == smp);
  CHECK(back.vacant.count() == back.window.size());
  std::filesystem::remove(path);
}

TEST_CASE("header layout is little-endian") {
  InterlacementSample smp;
  smp.window = Window(LatticePoint{-1, 0, 2}, LatticePoint{1, 1, 2});
  smp.u = 0.5;
  smp.u_max = 0.5;
  smp.mode = SamplerMode::truncate(7);
  smp.seed = 0x0102030405060708ull;
  smp.stream = 9;
  smp.occupancy = BitField(smp.window, false);
  smp.vacant = smp.occupancy.complement();
  const auto b = encode_sample(smp, false);
  CHECK(std::string(b.data(), 4) == "RILC");
  CHECK(le32(b, 4) == kSnapshotVersion);
  CHECK(std::string(b.data() + 8, 4) == "SMPL");
  CHECK(le32(b, 12) == 3);
  CHECK(le32(b, 16) == 3);
  CHECK(static_cast<std::int32_t>(le32(b, 20)) == -1);  // lo[0]
  CHECK(le32(b, 40) == 2);                              // hi[2]
  CHECK(b[44] == 0);                                    // box
  CHECK(b[45] == 0);                                    // truncate
  const std::size_t seed_at = 52 + 8 + 8 + 8;
  CHECK(static_cast<unsigned char>(b[seed_at]) == 0x08);
  CHECK(static_cast<unsigned char>(b[seed_at + 7]) == 0x01);
  double u = 0;
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(static_cast<unsigned char>(b[52 + std::size_t(i)])) << (8 * i);
  std::memcpy(&u, &bits, 8);
  CHECK(u == 0.5);
  // nbits = 3 * 2 * 1 = 6, one packed byte with six ones
  CHECK(le32(b, seed_at + 16) == 6);
  CHECK(static_cast<unsigned char>(b[seed_at + 24]) == 0x3F);
  CHECK(le32(b, b.size() - 4) == binio::crc32(b.data(), b.size() - 4));
}

TEST_CASE("corruption is detected") {
  const InterlacementSampler s(Window::box(3, 2), testing::green(3, 16), SamplerMode::exact());
  const auto bytes = encode_sample(s.sample(1.0, 5, 0));
  auto flipped = bytes;
  flipped[30] = static_cast<char>(flipped[30] ^ 1);
  CHECK_THROWS_AS(decode_sample(flipped), IoError);
  auto cut = bytes;
  cut.resize(cut.size() / 2);
  CHECK_THROWS_AS(decode_sample(cut), IoError);
  CHECK_THROWS_AS(decode_sample(std::vector<char>(3, 'x')), IoError);
  // A valid container with the wrong version.
  binio::Writer w;
  w.bytes("RILC");
  w.u32(kSnapshotVersion + 1);
  binio::append_crc(w);
  try {
    decode_sample(w.data());
    FAIL("expected a version error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
  const auto path = temp_file("cut.rilc");
  binio::write_file(path, cut);
  CHECK_THROWS_AS(load_sample(path), IoError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_sample(path), IoError);
}

TEST_CASE("goodness snapshot round trip") {
  Philox rng(41, 0);
  const auto w = Window::slab(4, 2);
  BitField v(w, false);
  for (std::size_t i = 0; i < w.size(); ++i) v.set(i, rng.uniform() < 0.85);
  GoodnessSnapshot g{GoodnessField(std::make_shared<const BitField>(v), 0.25, 1), 77, 3};
  const auto bytes = encode_goodness(g);
  const auto back = decode_goodness(bytes);
  CHECK(back.field == g.field);
  CHECK(back.seed == 77);
  CHECK(back.stream == 3);
  CHECK(encode_goodness(back) == bytes);
  CHECK_THROWS_AS(decode_sample(bytes), IoError);
  const auto path = temp_file("good.rilc");
  save_goodness(path, g);
  CHECK(load_goodness(path).field == g.field);
  std::filesystem::remove(path);
}
