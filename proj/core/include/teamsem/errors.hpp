#pragma once

#include <stdexcept>
#include <string>

namespace teamsem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by the formula and FO parsers; carries a 1-based source position.
struct ParseError : Error {
  ParseError(int line, int column, const std::string& what)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct ModelError : Error {
  using Error::Error;
};

struct EvalError : Error {
  using Error::Error;
};

struct FOError : Error {
  using Error::Error;
};

struct OverflowError : Error {
  using Error::Error;
};

}  // namespace teamsem
