#pragma once

#include <stdexcept>
#include <string>

namespace seqtc {

/// Bad caller input: out-of-range parameters, malformed points, wrong sizes.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An element or id refers to generators the presentation does not have.
class PresentationMismatch : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// A model or certificate check failed (non-confluence, vanishing witness,
/// Poincare mismatch).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds a fixed computational limit.
class CapacityError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace seqtc
