#ifndef BWR_ERROR_H
#define BWR_ERROR_H

#include <stdexcept>
#include <string>

namespace bwr {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed topology document or graph construction failure.
class TopologyError : public Error {
 public:
  using Error::Error;
};

// Destination unreachable from source.
class NoPathError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario, pattern or CDF table.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The exact worst-case oracle refused an instance with too many conflicts.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// Simulation invariants violated (unsorted arrivals, stalled event loop).
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace bwr

#endif  // BWR_ERROR_H
