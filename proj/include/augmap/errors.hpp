#pragma once

#include <stdexcept>
#include <string>

namespace augmap {

// Caller supplied a value outside an operation's domain.
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A structural precondition or invariant does not hold.
struct invariant_violation : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed text input; line is 1-based.
struct parse_error : std::runtime_error {
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  std::size_t line;
};

}  // namespace augmap

#ifndef AUGMAP_CHECKS
#ifdef NDEBUG
#define AUGMAP_CHECKS 0
#else
#define AUGMAP_CHECKS 1
#endif
#endif
