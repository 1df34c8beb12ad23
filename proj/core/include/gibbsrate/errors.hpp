#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gibbsrate {

/// Named failure conditions. Every precondition violation in the library maps
/// to one of these so front ends can report it without parsing messages.
enum class Errc {
  invalid_argument,
  dimension_mismatch,
  invalid_ratio,
  no_solution,
  non_invariant,
  too_large,
  non_convergence,
  detailed_balance,
  range,
  unsupported_prior,
  domain,
  truncation_too_small,
  invalid_state,
  invalid_d,
  invalid_r,
  non_contracting,
  empty_feasible_grid,
  below_validity,
  alpha_boundary,
  infeasible_n,
  rebuild_mismatch,
};

std::string_view to_string(Errc code) noexcept;

/// True for failures of a computation on valid input (non-convergence,
/// truncation, solver range exhaustion) as opposed to rejected parameters.
bool is_numerical_failure(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gibbsrate
