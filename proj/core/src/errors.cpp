#include "gibbsrate/errors.hpp"

namespace gibbsrate {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::invalid_ratio: return "invalid-ratio";
    case Errc::no_solution: return "no-solution";
    case Errc::non_invariant: return "non-invariant-stationary";
    case Errc::too_large: return "too-large";
    case Errc::non_convergence: return "non-convergence";
    case Errc::detailed_balance: return "detailed-balance-violation";
    case Errc::range: return "range-violation";
    case Errc::unsupported_prior: return "unsupported-prior";
    case Errc::domain: return "domain-violation";
    case Errc::truncation_too_small: return "truncation-too-small";
    case Errc::invalid_state: return "invalid-state";
    case Errc::invalid_d: return "invalid-d";
    case Errc::invalid_r: return "invalid-r";
    case Errc::non_contracting: return "non-contracting-parameters";
    case Errc::empty_feasible_grid: return "empty-feasible-grid";
    case Errc::below_validity: return "below-validity-threshold";
    case Errc::alpha_boundary: return "alpha-boundary";
    case Errc::infeasible_n: return "infeasible-n";
    case Errc::rebuild_mismatch: return "rebuild-mismatch";
  }
  return "unknown";
}

bool is_numerical_failure(Errc code) noexcept {
  switch (code) {
    case Errc::non_convergence:
    case Errc::truncation_too_small:
    case Errc::no_solution:
    case Errc::rebuild_mismatch:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace gibbsrate
