#pragma once

#include <stdexcept>
#include <string>

namespace amphi {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or voxel index outside the grid.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or preconditions (bad config, malformed file).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Procedural generation exhausted its retry budget.
class GenerationFailed : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// Cost table lookup outside the tabulated displacement cube.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A stop-stop maneuver did not settle before the timeout.
class UnreachableEntry : public Error {
 public:
  using Error::Error;
};

/// Cost table built for different parameters than the ones in use.
class StaleTable : public Error {
 public:
  using Error::Error;
};

/// File could not be read or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace amphi
