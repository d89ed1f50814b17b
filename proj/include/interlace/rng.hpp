#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace interlace {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// The 128-bit counter is split into a 64-bit block index (low words) and a
// 64-bit stream id (high words); the 64-bit key is the user seed. Two streams
// with different ids never share a block, and discard() jumps in O(1).
class Philox {
 public:
  using result_type = std::uint32_t;
  using block_type = std::array<std::uint32_t, 4>;

  Philox(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (used_ == 4) {
      buffer_ = generate(counter_of(block_), key_);
      ++block_;
      used_ = 0;
    }
    return buffer_[used_++];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    std::uint64_t hi = (*this)() >> 5;
    std::uint64_t lo = (*this)() >> 6;
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
  std::uint32_t below(std::uint32_t n) noexcept {
    std::uint64_t m = static_cast<std::uint64_t>((*this)()) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      std::uint32_t threshold = (0u - n) % n;
      while (low < threshold) {
        m = static_cast<std::uint64_t>((*this)()) * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // Skip `blocks` 128-bit blocks (4 outputs each) from the current block boundary.
  void discard_blocks(std::uint64_t blocks) noexcept {
    block_ += blocks;
    used_ = 4;
  }

  std::uint64_t stream() const noexcept { return stream_; }

  static block_type generate(block_type ctr, std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
      std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += w0;
      key[1] += w1;
    }
    return ctr;
  }

 private:
  block_type counter_of(std::uint64_t block) const noexcept {
    return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  block_type buffer_{};
  int used_ = 4;
};

}  // namespace interlace
