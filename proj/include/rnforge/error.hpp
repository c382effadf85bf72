#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnforge {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live on different atom spaces.
class SpaceMismatch : public Error {
 public:
  SpaceMismatch() : Error("operands belong to different atom spaces") {}
};

/// A documented precondition of an operation was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (files, labels, rational strings).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive sweep requested on a space that is too large.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// A declared hyperreal hint (monotonicity, limit, modulus) disagrees with
/// sampled values.
class HintViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A user-supplied rule threw or could not be evaluated at a sample point.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Standard part requested for an infinite hyperreal.
class InfiniteValue : public Error {
 public:
  using Error::Error;
};

/// lambda is not absolutely continuous w.r.t. nu; carries the offending atom.
class NotAbsolutelyContinuous : public Error {
 public:
  explicit NotAbsolutelyContinuous(std::size_t atom, const std::string& label)
      : Error("not absolutely continuous: nu(" + label + ") = 0 but lambda(" +
              label + ") != 0"),
        atom_(atom),
        label_(label) {}

  std::size_t atom() const noexcept { return atom_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::size_t atom_;
  std::string label_;
};

}  // namespace rnforge
