#pragma once

#include <stdexcept>
#include <string>

namespace loralink {

enum class ErrorCode {
  invalid_argument,
  domain,
  parse,
  validation,
  conflict,
  not_found,
  infeasible,
  io,
  transport,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Base of every error the library raises. The code is what the C API
/// reports; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed text input; `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::parse,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace loralink
