#pragma once

#include <stdexcept>
#include <string>

namespace qhh {

/// Bad input: malformed tangle word, malformed JSON, unknown flag value.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition was violated (q = 0, non-prime p, mismatched algebras, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (d^2 != 0, a structure map that should be a bimodule
/// isomorphism is not). Always indicates a bug, never bad input.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qhh
