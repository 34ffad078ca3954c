#pragma once

#include <stdexcept>
#include <string>

namespace eens {

// Base class for all library faults that callers may want to handle.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// A formula mentions an agent or proposition outside the active signature,
// or an action symbol violates the signature's ownership discipline.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// A formula falls outside the Boolean closure of the focus set, or an
// ensemble/test admitted to the symbolic engine breaks that restriction.
class FocusError : public Error {
 public:
  using Error::Error;
};

// A representative table lacks an entry that an update needs.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// The prover hit its resource ceiling without reaching a verdict.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

// A model-checking verdict would depend on unexplored configurations.
class UnknownVerdictError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}

  int line;
  int column;
};

}  // namespace eens
