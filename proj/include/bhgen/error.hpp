#pragma once

#include <stdexcept>
#include <string>

namespace bhgen {

enum class ErrorCode {
  invalid_argument = 1,
  config,
  io,
  quadrature_nonconvergence,
  bracket_failure,
  defective_denominator,
  empty_population,
  instability,
  mismatched_spec,
  empty_input,
  degenerate_variance,
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

}  // namespace bhgen
