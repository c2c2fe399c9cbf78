#pragma once

#include <stdexcept>
#include <string>

namespace invopt {

// Malformed input document (bad JSON, wrong types).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally broken instance or violated operation precondition
// (dangling ids, negative delta, designated set not a basis, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive enumeration requested beyond the desk-scale guard.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace invopt
