#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expolat {

enum class ErrorCode {
  dimension_mismatch,
  evaluation_overflow,
  insufficient_box,
  missing_phi,
  no_annihilator,
  ill_conditioned_projection,
  no_candidate,
  size_bound_exceeded,
  invalid_argument,
  parse_error,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` is the
// machine-readable part that the CLI forwards as {"error": ...}.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace expolat
