#include "loralink/error.hpp"

namespace loralink {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::parse: return "parse";
    case ErrorCode::validation: return "validation";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::io: return "io";
    case ErrorCode::transport: return "transport";
  }
  return "unknown";
}

}  // namespace loralink
