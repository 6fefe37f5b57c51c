// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emur {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

class InvalidDirection : public Error {
public:
  using Error::Error;
};

class InvalidEffect : public Error {
public:
  using Error::Error;
};

class InvalidState : public Error {
public:
  using Error::Error;
};

class UnsupportedInstrument : public Error {
public:
  using Error::Error;
};

// Mismatched labels, empty search grids, bad config values.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

// Count data that cannot be turned into a probability table.
class DegenerateData : public Error {
public:
  using Error::Error;
};

class EstimationError : public Error {
public:
  using Error::Error;
};

// Malformed text input; line() is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace emur
