#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzylex {

/// Error categories shared by every module. The service maps these onto
/// HTTP status codes and the `code` field of its error payloads.
enum class ErrorCode {
  parse_error,
  not_found,
  conflict,
  domain_error,
  state_error,
  internal_error,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fuzzylex
