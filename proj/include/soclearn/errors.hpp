#pragma once

#include <stdexcept>

namespace soclearn {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value or out-of-range argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A belief update that would leave no probability mass anywhere.
class DegenerateBeliefError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Not enough samples/points to produce a result.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The best-response curve never crosses the diagonal on the search grid.
class NoEquilibriumError : public Error {
 public:
  using Error::Error;
};

}  // namespace soclearn
