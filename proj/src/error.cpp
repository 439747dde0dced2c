#include "nchardy/error.hpp"

namespace nchardy {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::alphabet_mismatch: return "alphabet mismatch";
    case ErrorCode::domain: return "domain error";
    case ErrorCode::gram_singular: return "Gram matrix singular";
    case ErrorCode::unsupported_multiplicity: return "unsupported multiplicity";
    case ErrorCode::index_out_of_range: return "index out of range";
    case ErrorCode::inconclusive_tail: return "inconclusive tail";
    case ErrorCode::structure: return "structure error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::singular_matrix: return "singular matrix";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
  }
  return "unknown error";
}

}  // namespace nchardy
