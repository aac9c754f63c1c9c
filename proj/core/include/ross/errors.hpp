#pragma once

#include <stdexcept>
#include <string>

namespace ross {

// Argument outside the admissible radius/volume domain of a space.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Iterative procedure (bracketing, Newton, eigensolver) did not converge.
// The message carries a trace of the attempt.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or self-intersecting boundary, non-conforming mesh.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation requested for a space it does not support (e.g. FEM with m != 2).
class UnsupportedSpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Domain violates a theorem hypothesis (compact volume above the pi/4 ball).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ross
