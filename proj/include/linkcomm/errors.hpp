#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linkcomm {

// Malformed input record. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A quantity requested outside its domain (e.g. cost of the empty link set).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Prints each distinct message once to stderr.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace linkcomm
