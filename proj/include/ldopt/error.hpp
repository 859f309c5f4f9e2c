#pragma once

#include <stdexcept>
#include <string>

namespace ldopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the region where a function is defined
/// (e.g. a Michaelis-Menten canonical value c <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A design region for which no reduction theorem applies.
class UnclassifiableRegion : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure failed where theory says it cannot; usually
/// points at a misclassified interval upstream.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document. Carries the field and 1-based line.
class ParseError : public DomainError {
 public:
  ParseError(std::string field, int line, const std::string& what)
      : DomainError(format(field, line, what)), field_(std::move(field)), line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& field, int line, const std::string& what) {
    std::string msg = "field '" + field + "'";
    if (line > 0) msg += " (line " + std::to_string(line) + ")";
    return msg + ": " + what;
  }

  std::string field_;
  int line_;
};

}  // namespace ldopt
