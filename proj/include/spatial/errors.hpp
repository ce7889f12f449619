#pragma once

#include <stdexcept>
#include <string>

namespace spatial {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Text could not be parsed; `pos` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t pos)
      : Error(what + " (at offset " + std::to_string(pos) + ")"), pos(pos) {}
  size_t pos;
};

class ReflexiveFactError : public ParseError {
 public:
  ReflexiveFactError(const std::string& what, size_t pos) : ParseError(what, pos) {}
};

class UnknownRelationError : public ParseError {
 public:
  UnknownRelationError(const std::string& what, size_t pos) : ParseError(what, pos) {}
};

// A rule concludes on a variable that no premise binds.
class UnsafeRuleError : public Error {
 public:
  UnsafeRuleError(const std::string& what, const std::string& variable)
      : Error(what), variable(variable) {}
  std::string variable;
};

// Malformed JSON document or a document that fails schema validation.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class UnknownEntityError : public Error {
 public:
  explicit UnknownEntityError(const std::string& what) : Error(what) {}
};

// Closure grew past the 15 * n^2 hard bound; only reachable via corrupted state.
class ResourceLimitError : public Error {
 public:
  explicit ResourceLimitError(const std::string& what) : Error(what) {}
};

class MissingVariableError : public Error {
 public:
  explicit MissingVariableError(const std::string& what) : Error(what) {}
};

class ProbabilityOutOfRangeError : public Error {
 public:
  explicit ProbabilityOutOfRangeError(const std::string& what) : Error(what) {}
};

// Finite-difference check requested at a point where an implication sits on
// its a == b kink and central differences straddle the branch.
class KinkPointError : public Error {
 public:
  explicit KinkPointError(const std::string& what) : Error(what) {}
};

class NotAnOppositePairError : public Error {
 public:
  explicit NotAnOppositePairError(const std::string& what) : Error(what) {}
};

class UnsupportedSymbolError : public Error {
 public:
  explicit UnsupportedSymbolError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

class NonFiniteLossError : public Error {
 public:
  NonFiniteLossError(const std::string& what, int epoch) : Error(what), epoch(epoch) {}
  int epoch;
};

}  // namespace spatial
