#pragma once

#include <stdexcept>
#include <string>

namespace stab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error with 1-based source position.
struct ParseError : Error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

struct NotARedex : Error {
  using Error::Error;
};

struct FuelExhausted : Error {
  using Error::Error;
};

/// A derivation node violates the side conditions of its rule.
struct RuleViolation : Error {
  std::string rule;
  RuleViolation(const std::string& rule_, const std::string& why)
      : Error("rule " + rule_ + ": " + why), rule(rule_) {}
};

struct ShapeMismatch : Error {
  using Error::Error;
};

/// Machine reached a configuration where no rule applies; carries the
/// rendered configuration for diagnosis.
struct Stuck : Error {
  using Error::Error;
};

struct SpecError : Error {
  using Error::Error;
};

struct SimulationFailure : Error {
  using Error::Error;
};

}  // namespace stab
