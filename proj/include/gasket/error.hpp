#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gasket {

enum class errc {
  invalid_argument,
  no_common_cell,
  step_budget_exceeded,
  precondition_violated,
  unknown_shape,
  singular_system,
  mismatch_with_reference,
  cap_exceeded,
  ill_conditioned_system,
  insufficient_depth,
  empty_input,
  degenerate_cells,
  config_invalid,
  io_error,
};

std::string_view to_string(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace gasket
