#pragma once

#include <stdexcept>
#include <string>

namespace bvloc {

// Exit codes shared by the CLI and the check registry.
enum class ExitCode : int {
  ok = 0,
  invariant_violated = 1,
  precondition_failed = 2,
  io_error = 3,
};

struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an operation is asked for data it cannot produce:
// mismatched dimensions, missing named fields, degenerate weight matrices,
// non-finite values inside an integration domain.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IOError : std::runtime_error {
  explicit IOError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bvloc
