#pragma once

#include <stdexcept>
#include <string>

namespace scottflat {

// Malformed input text; carries a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that violates a precondition (index range, unknown symbol, bad arity).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap was exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structure that was supposed to satisfy the flat axioms does not.
class FlatnessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The arity bound ran out before a covering chain closed.
class TruncationTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scottflat
