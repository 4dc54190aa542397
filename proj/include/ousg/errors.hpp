#pragma once

#include <stdexcept>

namespace ousg {

// Invalid user-supplied configuration (parameters, ranges, lengths, grids).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor or vector dimension mismatch.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse: updating a frozen level, reusing a consumed tape, malformed traces.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weight-file problems; the message names the offending field.
struct PersistenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures in the experiment harness.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ousg
