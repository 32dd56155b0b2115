#include "bhgen/error.hpp"

namespace bhgen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::config: return "config-error";
    case ErrorCode::io: return "io-error";
    case ErrorCode::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorCode::bracket_failure: return "bracket-failure";
    case ErrorCode::defective_denominator: return "defective-denominator";
    case ErrorCode::empty_population: return "empty-population";
    case ErrorCode::instability: return "instability";
    case ErrorCode::mismatched_spec: return "mismatched-spec";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::degenerate_variance: return "degenerate-variance";
  }
  return "unknown";
}

}  // namespace bhgen
