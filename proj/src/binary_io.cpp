#include "interlace/binary_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

namespace interlace::binio {

std::uint32_t crc32(const char* data, std::size_t n) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

void append_crc(Writer& w) { w.u32(crc32(w.data().data(), w.data().size())); }

std::size_t check_crc(const std::vector<char>& buf, const std::string& what) {
  if (buf.size() < 4) throw IoError("checksum failure (truncated): " + what);
  const std::size_t payload = buf.size() - 4;
  Reader trailer(buf, buf.size());
  trailer.bytes(payload);
  if (trailer.u32() != crc32(buf.data(), payload)) throw IoError("checksum failure: " + what);
  return payload;
}

void write_file(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_with_crc(const std::filesystem::path& path, Writer& w) {
  append_crc(w);
  write_file(path, w.data());
}

std::size_t read_with_crc(const std::filesystem::path& path, std::vector<char>& buf) {
  buf = read_file(path);
  return check_crc(buf, path.string());
}

}  // namespace interlace::binio
