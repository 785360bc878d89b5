#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpid {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or configuration value was rejected.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A configuration named a parameter the scenario does not know.
class UnknownKeyError : public InvalidArgument {
 public:
  explicit UnknownKeyError(const std::string& key)
      : InvalidArgument("unknown parameter '" + key + "'"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A configuration is missing a parameter that has no default.
class MissingKeyError : public InvalidArgument {
 public:
  explicit MissingKeyError(const std::string& key)
      : InvalidArgument("missing required parameter '" + key + "'"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// File could not be opened, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by the integrator when a field evaluation is not finite.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double t, std::size_t component,
                   std::size_t step)
      : NumericalError(what), t_(t), component_(component), step_(step) {}

  double time() const noexcept { return t_; }
  std::size_t component() const noexcept { return component_; }
  std::size_t step() const noexcept { return step_; }

 private:
  double t_;
  std::size_t component_;
  std::size_t step_;
};

}  // namespace gpid
