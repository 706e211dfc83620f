#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Requested cycle cannot fit N guard intervals plus any transmission time.
class InfeasibleCycle : public Error {
 public:
  using Error::Error;
};

/// Service shares need a positive global load (it divides the class loads).
class UndefinedShares : public Error {
 public:
  using Error::Error;
};

/// A station was asked for a stationary quantity while λ reaches its capacity.
class UnstableStation : public Error {
 public:
  using Error::Error;
};

class NoStationaryDistribution : public Error {
 public:
  using Error::Error;
};

class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

/// Little's-law probe on a run with nothing delivered.
class UndefinedCheck : public Error {
 public:
  using Error::Error;
};

class EmptyOutput : public Error {
 public:
  using Error::Error;
};

/// Scenario text rejected; carries the 1-based line of the offending entry
/// (0 when the problem is not tied to one line).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace epon
