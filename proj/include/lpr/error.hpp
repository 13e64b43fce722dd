#pragma once

#include <stdexcept>
#include <string>

namespace lpr {

/// Base class of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the object is defined
/// (empty family, degenerate shell, empty kernel piece).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A configuration or manifest fails validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a report file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpr
