#pragma once

#include <stdexcept>
#include <string>

namespace h22 {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid graph construction input.
class GraphError : public Error {
 public:
  enum class Kind { kEmpty, kBadVertex, kSelfLoop, kDuplicateEdge, kNonpositiveWeight, kDisconnected, kNotLadder };

  GraphError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class PinningError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector/matrix sizes or out-of-range vertex arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Overflow in conductances or a failed positive-definite factorization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration refused because the instance is too large.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// MCMC diagnostics out of range (e.g. collapsed acceptance rate).
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

/// Bad user configuration (CLI flags, config files, preconditions of an experiment).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace h22
