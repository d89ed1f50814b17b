#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "interlace/green.hpp"

#ifndef INTERLACE_TEST_CACHE
#define INTERLACE_TEST_CACHE "."
#endif

namespace testing {

// Quadrature Green tables shared by all test binaries through files in the
// build tree.
inline const interlace::GreenTable& green(int d, int radius) {
  static std::mutex m;
  static std::map<std::pair<int, int>, interlace::GreenTable> tables;
  std::lock_guard lock(m);
  auto it = tables.find({d, radius});
  if (it != tables.end()) return it->second;
  const std::filesystem::path dir(INTERLACE_TEST_CACHE);
  std::filesystem::create_directories(dir);
  const auto path = dir / ("green_d" + std::to_string(d) + "_r" + std::to_string(radius) + ".grnt");
  auto t = interlace::load_or_build_green_table(path, d, radius, interlace::GreenMethod::quadrature);
  return tables.emplace(std::make_pair(d, radius), std::move(t)).first->second;
}

}  // namespace testing
