#pragma once

#include <stdexcept>
#include <string>

namespace hk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point (or set representation) whose payload does not match the space kind.
struct KindMismatchError : Error {
  using Error::Error;
};

// An argument outside the operation's domain (t outside [0,1], coincident
// vertices, zero-length direction, ...).
struct DomainError : Error {
  using Error::Error;
};

// A stated precondition that is checked at runtime failed (e.g. y not in C).
struct PreconditionError : Error {
  using Error::Error;
};

// Structural invalidity detected while constructing a space.
struct ConstructionError : Error {
  using Error::Error;
};

// Malformed input file or JSON document.
struct ParseError : Error {
  using Error::Error;
};

// A representation that is valid JSON but unsupported in the given space
// (e.g. tree_hull outside a tree).
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace hk
