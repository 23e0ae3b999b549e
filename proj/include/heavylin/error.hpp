#pragma once

#include <stdexcept>
#include <string>

namespace heavylin {

enum class ErrorCode {
  invalid_argument = 1,
  range = 2,
  config = 3,
  numerical_fault = 4,
  io = 5,
};

/// Base exception for the library. The code maps one-to-one onto the
/// status values of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

/// An innovation window or index range does not cover what an operation needs.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorCode::range, what) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(ErrorCode::config, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Quadrature or root finding failed. Signals an implementation or model
/// fault, not bad user input.
class NumericalFault : public Error {
 public:
  explicit NumericalFault(const std::string& what) : Error(ErrorCode::numerical_fault, what) {}
};

}  // namespace heavylin
