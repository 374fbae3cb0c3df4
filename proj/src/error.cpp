#include "gasket/error.hpp"

namespace gasket {

std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::no_common_cell: return "no-common-cell";
    case errc::step_budget_exceeded: return "step-budget-exceeded";
    case errc::precondition_violated: return "precondition-violated";
    case errc::unknown_shape: return "unknown-shape";
    case errc::singular_system: return "singular-system";
    case errc::mismatch_with_reference: return "mismatch-with-reference";
    case errc::cap_exceeded: return "cap-exceeded";
    case errc::ill_conditioned_system: return "ill-conditioned-system";
    case errc::insufficient_depth: return "insufficient-depth";
    case errc::empty_input: return "empty-input";
    case errc::degenerate_cells: return "degenerate-cells";
    case errc::config_invalid: return "config-invalid";
    case errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace gasket
