#pragma once

#include <stdexcept>
#include <string>

namespace gframe {

/// Base class for every error raised by the library.
class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of vectors, masks, or operator blocks do not agree.
class DimensionError : public FrameError {
 public:
  using FrameError::FrameError;
};

/// Eigensolver failure or non-finite intermediate values.
class NumericalError : public FrameError {
 public:
  using FrameError::FrameError;
};

/// The frame operator is singular to within the rank threshold.
class NotAFrameError : public FrameError {
 public:
  using FrameError::FrameError;
};

/// A verifier was called on inputs that violate its hypothesis.
class PreconditionError : public FrameError {
 public:
  using FrameError::FrameError;
};

/// Perturbation parameters fail max(lambda1 + mu/sqrt(A), lambda2) < 1.
class GateError : public FrameError {
 public:
  using FrameError::FrameError;
};

/// Invalid construction parameters or experiment configuration.
class ConfigError : public FrameError {
 public:
  using FrameError::FrameError;
};

}  // namespace gframe
