#pragma once

#include <stdexcept>
#include <string>

namespace tiletopo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidWordError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfigurationError : public Error {
 public:
  using Error::Error;
};

class InconsistentParameterError : public Error {
 public:
  using Error::Error;
};

// Raised when an input falls outside the hypothesis of a closed-form criterion.
class HypothesisViolationError : public Error {
 public:
  using Error::Error;
};

// Malformed run configuration; line is 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace tiletopo
