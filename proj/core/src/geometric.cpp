#include "gibbsrate/geometric.hpp"

#include <cmath>
#include <limits>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const GeometricTerm& t) {
  if (std::isnan(t.log_ratio) || t.log_ratio > 0.0) {
    throw Error(Errc::invalid_ratio, "geometric ratio must lie in [0, 1]");
  }
  if (!std::isfinite(t.exponent_offset)) {
    throw Error(Errc::invalid_argument, "exponent offset must be finite");
  }
}

LogMagnitude evaluate_term(const GeometricTerm& t, long double steps) {
  if (t.coefficient.is_zero()) return LogMagnitude::zero();
  const long double exponent = steps + static_cast<long double>(t.exponent_offset);
  if (t.log_ratio == 0.0 || exponent == 0.0L) return t.coefficient;
  if (t.log_ratio == kNegInf) {
    if (exponent > 0.0L) return LogMagnitude::zero();
    throw Error(Errc::domain, "zero ratio raised to a negative exponent");
  }
  const long double log_value =
      static_cast<long double>(t.coefficient.log()) + exponent * static_cast<long double>(t.log_ratio);
  return LogMagnitude::from_log(static_cast<double>(log_value));
}

}  // namespace

GeometricTerm GeometricTerm::from_ratio(LogMagnitude coefficient, double ratio, double exponent_offset) {
  if (std::isnan(ratio) || ratio < 0.0 || ratio > 1.0) {
    throw Error(Errc::invalid_ratio, "geometric ratio must lie in [0, 1]");
  }
  return from_log_ratio(coefficient, ratio == 0.0 ? kNegInf : std::log(ratio), exponent_offset);
}

GeometricTerm GeometricTerm::from_log_ratio(LogMagnitude coefficient, double log_ratio,
                                            double exponent_offset) {
  GeometricTerm t{coefficient, log_ratio, exponent_offset};
  validate(t);
  return t;
}

const StepCount& geometric_step_cap() {
  static const StepCount cap = StepCount::pow10(40);
  return cap;
}

LogMagnitude evaluate_geometric(std::span<const GeometricTerm> terms, const StepCount& steps) {
  const long double l = steps.to_long_double();
  LogMagnitude sum;
  for (const auto& t : terms) {
    validate(t);
    sum += evaluate_term(t, l);
  }
  return sum;
}

StepCount min_steps_geometric(std::span<const GeometricTerm> terms, LogMagnitude target) {
  if (terms.empty()) throw Error(Errc::invalid_argument, "at least one geometric term is required");
  if (target.is_zero()) throw Error(Errc::invalid_argument, "target must be positive");
  for (const auto& t : terms) validate(t);

  LogMagnitude floor_value;
  for (const auto& t : terms) {
    if (t.log_ratio == 0.0) floor_value += t.coefficient;
  }
  if (floor_value > target) {
    throw Error(Errc::no_solution, "terms with ratio 1 already exceed the target");
  }

  auto fits = [&](const StepCount& l) { return evaluate_geometric(terms, l) <= target; };

  const StepCount& cap = geometric_step_cap();
  if (fits(StepCount(0))) return StepCount(0);

  StepCount lo(0);
  StepCount hi(1);
  while (!fits(hi)) {
    lo = hi;
    if (hi >= cap) throw Error(Errc::no_solution, "no step count up to 1e40 reaches the target");
    hi = StepCount(StepCount::Int(hi.value() * 2));
    if (hi > cap) hi = cap;
  }
  // Invariant: f(lo) > target >= f(hi).
  while (hi.value() - lo.value() > 1) {
    StepCount mid(StepCount::Int((lo.value() + hi.value()) / 2));
    if (fits(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace gibbsrate
