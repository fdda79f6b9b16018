#pragma once

#include <stdexcept>
#include <string>

namespace loopdl {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Syntax or static-check failure in program or formula text.
class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Malformed verification problem, annotation file or command option.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A rule was asked to fire on a goal it does not match.
class NotApplicable : public Error {
public:
  using Error::Error;
};

}  // namespace loopdl
