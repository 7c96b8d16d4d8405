#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace osn {

/// Base class for all errors raised by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (edge list, attribute file, config). Message carries
/// the offending line number.
struct ParseError : Error {
  using Error::Error;
};

/// A walk ran out of usable neighbors: every neighbor of the current node is
/// invalid (friend list hidden). Carries the position where the walk stopped.
struct StallError : Error {
  StallError(const std::string& msg, std::size_t iteration, std::uint32_t node)
      : Error(msg), iteration(iteration), node(node) {}
  std::size_t iteration;
  std::uint32_t node;
};

}  // namespace osn
