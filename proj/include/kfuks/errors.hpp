#pragma once

#include <stdexcept>
#include <string>

namespace kfuks {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched jet shapes, out-of-range multi-indices and similar misuse.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Inverse, log or power of a jet whose constant term vanishes.
class SingularJetError : public Error {
 public:
  using Error::Error;
};

/// Jet matrix whose constant-term matrix is numerically singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain of a kernel provider or a map.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument (zero tangent vector, non-tangent vector, bad config).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Cholesky failure on a metric that should be positive definite.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Levi form not positive definite on the complex tangent space.
class PseudoconvexityError : public Error {
 public:
  using Error::Error;
};

}  // namespace kfuks
