#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "interlace/goodness.hpp"
#include "interlace/sampler.hpp"

namespace interlace {

// RILC container, little-endian, CRC32 trailer:
//   "RILC" u32 version, char[4] section tag ("SMPL" | "GOOD"), u32 d,
//   u32 ambient_d, i32 lo[d], i32 hi[d], u8 shape, u8 mode, u16 reserved,
//   i32 slab_n, f64 u, f64 u_max, f64 mode_radius, u64 seed, u64 stream,
//   u64 nbits, packed bits (LSB first, row-major, last axis fastest),
//   then a section body, then u32 crc32 of everything before it.
// SMPL: the bits are the vacant field; body = u32 has_trajectories
//   [u64 count, per trajectory: f64 label, u32 entries, u64 len, u32 idx[len]].
// GOOD: the bits are the good flags over the Z^3 window; body = the vacant
//   field (i32 lo[D], i32 hi[D], u8 shape, i32 slab_n, u64 nbits, bits) and
//   u64 count of anchor records u32[7].
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<char> encode_sample(const InterlacementSample& s, bool with_trajectories = true);
InterlacementSample decode_sample(const std::vector<char>& bytes);
void save_sample(const std::filesystem::path& path, const InterlacementSample& s, bool with_trajectories = true);
InterlacementSample load_sample(const std::filesystem::path& path);

struct GoodnessSnapshot {
  GoodnessField field;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

std::vector<char> encode_goodness(const GoodnessSnapshot& g);
GoodnessSnapshot decode_goodness(const std::vector<char>& bytes);
void save_goodness(const std::filesystem::path& path, const GoodnessSnapshot& g);
GoodnessSnapshot load_goodness(const std::filesystem::path& path);

}  // namespace interlace
