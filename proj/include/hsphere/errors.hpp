#pragma once

#include <stdexcept>
#include <string>

namespace hsphere {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse_error"; }
};

/// Non-manifold, open, non-orientable or metrically invalid surface.
class TopologyError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "topology_error"; }
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition_error"; }
};

/// A construction could not be completed on the given mesh (usually too coarse).
class ConstructionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "construction_error"; }
};

}  // namespace hsphere
