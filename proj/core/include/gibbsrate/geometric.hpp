#pragma once

#include <span>

#include "gibbsrate/log_magnitude.hpp"
#include "gibbsrate/step_count.hpp"

namespace gibbsrate {

/// One term c * rho^(l + offset) of a geometric bound. The ratio is held as
/// its logarithm: ratios like 1 - 2^-100 are not representable as doubles.
struct GeometricTerm {
  LogMagnitude coefficient = LogMagnitude::one();
  double log_ratio = 0.0;  // in [-inf, 0]; -inf encodes ratio 0
  double exponent_offset = 0.0;

  static GeometricTerm from_ratio(LogMagnitude coefficient, double ratio, double exponent_offset = 0.0);
  static GeometricTerm from_log_ratio(LogMagnitude coefficient, double log_ratio,
                                      double exponent_offset = 0.0);
};

/// Search ceiling for min_steps_geometric.
const StepCount& geometric_step_cap();

LogMagnitude evaluate_geometric(std::span<const GeometricTerm> terms, const StepCount& steps);

/// Minimal l with sum_i c_i rho_i^(l + offset_i) <= target. Brackets by
/// doubling from 1, then bisects; every evaluation is in log domain.
/// Throws Errc::no_solution when the cap (10^40) is reached first.
StepCount min_steps_geometric(std::span<const GeometricTerm> terms, LogMagnitude target);

}  // namespace gibbsrate
