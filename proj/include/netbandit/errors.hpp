#pragma once

#include <stdexcept>
#include <string>

namespace netbandit {

// File/format errors carry the 1-based line where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line)
      : std::runtime_error(std::move(message)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A structurally invalid graph, environment, or experiment config.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-range parameters (p outside (0,1), exponent <= 1, ...).
class ParamError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace netbandit
