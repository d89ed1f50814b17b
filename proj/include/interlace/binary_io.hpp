#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "interlace/error.hpp"

namespace interlace::binio {

// Little-endian byte buffer writer, independent of host byte order.
class Writer {
 public:
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }

  const std::vector<char>& data() const noexcept { return buf_; }
  std::vector<char>& data() noexcept { return buf_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(const std::vector<char>& buf, std::size_t end) : buf_(buf), end_(end) {}

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
  double f64() { return std::bit_cast<double>(get(8)); }

  std::size_t position() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == end_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > end_) throw IoError("unexpected end of data");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  const std::vector<char>& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32(const char* data, std::size_t n);

// Appends the CRC32 of the current contents.
void append_crc(Writer& w);
// Verifies the CRC32 trailer and returns the payload size.
std::size_t check_crc(const std::vector<char>& buf, const std::string& what);

void write_file(const std::filesystem::path& path, const std::vector<char>& bytes);
std::vector<char> read_file(const std::filesystem::path& path);

// Appends a CRC32 trailer and writes the buffer.
void write_with_crc(const std::filesystem::path& path, Writer& w);

// Reads a file, checks and strips the CRC32 trailer. Returns the payload
// size (the buffer keeps the trailer bytes).
std::size_t read_with_crc(const std::filesystem::path& path, std::vector<char>& buf);

}  // namespace interlace::binio
