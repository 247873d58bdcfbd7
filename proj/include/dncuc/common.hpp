// Shared error types and small utilities.
#pragma once

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace dncuc {

// Raised on malformed input files; carries the file location when known.
class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
  parse_error(const std::string& file, int line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg) {}
};

// Raised when a structurally valid input violates a model invariant.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised on inconsistent solver/run configuration.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a subproblem solve fails in a way the caller cannot recover from.
class solve_error : public std::runtime_error {
public:
  explicit solve_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an iterative run exhausts its budget without meeting the
// stopping rule. Kept apart from solve_error so callers can report
// non-convergence differently from a broken or infeasible model.
class convergence_error : public solve_error {
public:
  explicit convergence_error(const std::string& msg) : solve_error(msg) {}
};

inline std::string strfmt(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[1024];
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf);
}

inline bool approx_eq(double a, double b, double tol = 1e-9) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline double sqr(double x) { return x * x; }

}  // namespace dncuc
