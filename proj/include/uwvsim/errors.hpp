#pragma once

#include <stdexcept>
#include <string>

namespace uwv {

// Malformed input document (JSON syntax, missing or mistyped fields).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input violating a domain invariant; the message names the
// offending entity and field.
struct ConstraintError : std::runtime_error {
  explicit ConstraintError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uwv
