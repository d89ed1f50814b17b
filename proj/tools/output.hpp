#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace interlace::cli {

using Value = std::variant<std::int64_t, double, bool, std::string>;

// One result row with fields in insertion order.
struct Row {
  std::vector<std::pair<std::string, Value>> fields;

  Row& add(std::string key, Value v) {
    fields.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  template <class T>
    requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
  Row& add(std::string key, T v) {
    return add(std::move(key), Value(static_cast<std::int64_t>(v)));
  }
};

enum class Format { csv, ndjson };

Format parse_format(const std::string& s);

// Writes rows as CSV (header from the first row) or ND-JSON. Every row
// carries the config hash.
class Emitter {
 public:
  Emitter(Format format, std::string config_hash) : format_(format), hash_(std::move(config_hash)) {}
  void add_sink(std::ostream& os) { sinks_.push_back(&os); }
  void emit(const Row& row);

 private:
  Format format_;
  std::string hash_;
  std::vector<std::ostream*> sinks_;
  bool header_done_ = false;
};

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

nlohmann::ordered_json to_json(const Value& v);

}  // namespace interlace::cli
