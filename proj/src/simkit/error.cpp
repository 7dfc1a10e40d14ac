// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "simkit/error.hpp"

namespace rwrs {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unsupported_method: return "unsupported-method";
    case ErrorCode::resource_limit: return "resource-limit";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace rwrs
