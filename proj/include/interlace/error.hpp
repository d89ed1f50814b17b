#pragma once

#include <stdexcept>
#include <string>

namespace interlace {

// Process exit codes; every library error maps onto one of them.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  coverage = 3,
  numeric = 4,
  io = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

// A Green-table lookup (or a window) does not cover a requested difference vector.
struct CoverageError : Error {
  explicit CoverageError(const std::string& what) : Error(ExitCode::coverage, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ExitCode::numeric, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ExitCode::io, what) {}
};

// Rerouting could not connect two good sites inside the finite window.
struct NoWitnessError : Error {
  explicit NoWitnessError(const std::string& what) : Error(ExitCode::numeric, what) {}
};

}  // namespace interlace
