#include "fuzzylex/error.hpp"

namespace fuzzylex {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::state_error: return "state_error";
    case ErrorCode::internal_error: return "internal_error";
  }
  return "internal_error";
}

}  // namespace fuzzylex
