#include "output.hpp"

#include <cmath>
#include <cstdio>

#include "interlace/error.hpp"

namespace interlace::cli {

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "ndjson") return Format::ndjson;
  throw ConfigError("unknown output format '" + s + "' (expected csv or ndjson)");
}

namespace {

std::string csv_cell(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  const auto& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

nlohmann::ordered_json to_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return *d;
  }
  return std::get<std::string>(v);
}

void Emitter::emit(const Row& row) {
  std::string line;
  if (format_ == Format::csv) {
    if (!header_done_) {
      std::string header;
      for (const auto& [k, v] : row.fields) header += k + ",";
      header += "config_hash\n";
      for (auto* s : sinks_) *s << header;
      header_done_ = true;
    }
    for (const auto& [k, v] : row.fields) line += csv_cell(v) + ",";
    line += hash_ + "\n";
  } else {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : row.fields) j[k] = to_json(v);
    j["config_hash"] = hash_;
    line = j.dump() + "\n";
  }
  for (auto* s : sinks_) *s << line << std::flush;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace interlace::cli
