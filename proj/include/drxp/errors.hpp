#pragma once

#include <stdexcept>
#include <string>

namespace drxp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DomainViolation : public Error {
 public:
  using Error::Error;
};

/// The classifier disagrees with the label given for an instance.
class PredictionMismatch : public Error {
 public:
  PredictionMismatch(std::string predicted, const std::string& what)
      : Error(what), predicted_(std::move(predicted)) {}
  const std::string& predicted() const noexcept { return predicted_; }

 private:
  std::string predicted_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class CombinatorialLimit : public Error {
 public:
  using Error::Error;
};

/// External oracle crashed, timed out, or violated the protocol.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// Probe results contradict predicate monotonicity.
class OracleInconsistency : public Error {
 public:
  using Error::Error;
};

/// The instance admits no explanation of the requested kind
/// (e.g. a CXp for an epsilon-robust instance).
class NoExplanation : public Error {
 public:
  using Error::Error;
};

class SeedEngineOverflow : public Error {
 public:
  using Error::Error;
};

class IncompleteFamily : public Error {
 public:
  using Error::Error;
};

}  // namespace drxp
