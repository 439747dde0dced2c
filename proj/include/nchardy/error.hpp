#pragma once

#include <stdexcept>
#include <string>

namespace nchardy {

enum class ErrorCode {
  invalid_argument,
  alphabet_mismatch,
  domain,
  gram_singular,
  unsupported_multiplicity,
  index_out_of_range,
  inconclusive_tail,
  structure,
  parse,
  singular_matrix,
  dimension_mismatch,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nchardy
