#pragma once

#include <stdexcept>
#include <string>

namespace hrnvo {

// Input file or directory missing.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file present but unparseable beyond tolerance.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally valid input that carries no usable signal (all-zero frame,
// zero-variance trace, rank-deficient point set).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trajectories share no time range; evaluation cannot proceed.
class NoOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hrnvo
