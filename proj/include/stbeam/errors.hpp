#pragma once

#include <stdexcept>
#include <string>

namespace stbeam {

// Invalid physical description (non-positive dimensions, inverted annulus, ...).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration file / override problems (missing file, unknown key, bad value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A power series failed to meet the truncation policy within max_terms.
// Carries the last observed tail estimate so callers can report how far off it was.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double tail_estimate)
      : std::runtime_error(what), tail_estimate_(tail_estimate) {}
  double tail_estimate() const noexcept { return tail_estimate_; }

 private:
  double tail_estimate_;
};

// A partial sum left the representable range; the trial eigenvalue is far
// outside the regime the series evaluation is meant for.
class SeriesRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The scan found fewer sign changes than roots requested below lambda_max.
class InsufficientRangeError : public std::runtime_error {
 public:
  InsufficientRangeError(const std::string& what, int found, int requested)
      : std::runtime_error(what), found_(found), requested_(requested) {}
  int found() const noexcept { return found_; }
  int requested() const noexcept { return requested_; }

 private:
  int found_;
  int requested_;
};

// mode_shape was asked to reconstruct a shape at a value that is not a
// converged root of the characteristic function.
class NotAnEigenvalueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Ritz oracle could not assemble a valid (symmetric positive definite)
// generalized eigenproblem.
class OracleAssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stbeam
