#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbsrate/drift_minorization.hpp"
#include "gibbsrate/errors.hpp"
#include "gibbsrate/geometric.hpp"
#include "gibbsrate/stochastic.hpp"

namespace gibbsrate {

// ---------------------------------------------------------------------------
// Drift/minorization (Rosenthal-type) bound
//
//   TV(l) <= (1 - eps)^{r l} + (u^r / A^{1-r})^l (1 + b/(1 - lambda) + V(x0))
//   A = (1 + d) / (1 + 2b + lambda d),   u = 1 + 2(lambda d + b),
//   d >= 2b / (1 - lambda),  0 < r < 1.
//
// A is called rosenthal_alpha below; it is unrelated to the scan weight.
// ---------------------------------------------------------------------------

struct RosenthalParams {
  double d = 0.0;
  double r = 0.5;
};

struct RosenthalConstants {
  double rosenthal_alpha = 1.0;
  double u = 1.0;
  /// log of u^r / rosenthal_alpha^{1-r}; must be < 0 for the bound to decay.
  double log_contraction = 0.0;
  /// 1 + b/(1 - lambda) + V(x0)
  double drift_coefficient = 1.0;
};

/// Validates d and r (invalid_d / invalid_r) and derives the constants.
RosenthalConstants rosenthal_constants(const DriftMinorization& cert, const RosenthalParams& params);

/// The two geometric terms of the bound, coupling term first.
std::vector<GeometricTerm> rosenthal_terms(const DriftMinorization& cert, const RosenthalParams& params);

struct RosenthalEvaluation {
  LogMagnitude value;
  LogMagnitude coupling_term;
  LogMagnitude drift_term;
  bool non_contracting = false;  // contraction ratio exactly 1
  bool vacuous = false;          // value >= 1
};

/// Throws non_contracting when u^r / A^{1-r} > 1; a ratio of exactly 1 is
/// evaluated and flagged.
RosenthalEvaluation rosenthal_bound(const DriftMinorization& cert, const RosenthalParams& params,
                                    const StepCount& steps);

/// Minimal l with bound <= target; target in (0, 1).
StepCount rosenthal_min_steps(const DriftMinorization& cert, const RosenthalParams& params, double target);

struct GridPoint {
  RosenthalParams params;
  Errc reason = Errc::invalid_argument;
};

struct GridOptimum {
  RosenthalParams best;
  StepCount steps;
  std::vector<GridPoint> skipped;
};

/// Best (d, r) over the product grid. Infeasible points are skipped and
/// reported; ties go to the smaller d, then the smaller r.
GridOptimum rosenthal_grid_optimize(const DriftMinorization& cert, double target, std::span<const double> d_grid,
                                    std::span<const double> r_grid);

// ---------------------------------------------------------------------------
// Two-term geometric bound A^l + w B^l
// ---------------------------------------------------------------------------

double two_term_bound(double a, double b, double weight, const StepCount& steps);
StepCount two_term_min_steps(double a, double b, double weight, double target);

// ---------------------------------------------------------------------------
// Beta/binomial (uniform prior) scan bounds
// ---------------------------------------------------------------------------

struct BoundValue {
  double value = 0.0;
  bool vacuous = false;
  /// Set when a start state was supplied that violates theta0 >= 1/2.
  bool applicability_warning = false;
};

enum class SystematicScan { k, ktilde };

/// ceil(3n/4): first step count at which random_scan_upper applies.
std::uint64_t random_scan_upper_threshold(int n);
/// ceil(3n/16): first step count at which systematic_upper applies.
std::uint64_t systematic_threshold(int n);

/// Rate of the random-scan upper bound: 1/2 + (1/2) sqrt(1 - 2/(n+2)).
double random_scan_rate(int n);

/// (1/3)(1 - 1/(n+2))^l, for l >= 1.
BoundValue random_scan_lower(int n, const StepCount& steps, std::optional<double> theta0 = std::nullopt);

/// 3 e^{-(l-1)/8} + 10 sqrt((n+2)/n) rate^{l-1}, for l >= ceil(3n/4).
BoundValue random_scan_upper(int n, const StepCount& steps, std::optional<double> theta0 = std::nullopt);

/// 10 (1 - 2/(n+2))^l for K, with exponent l - 1/2 for K-tilde; l >= ceil(3n/16).
BoundValue systematic_upper(int n, const StepCount& steps, SystematicScan which);

std::vector<GeometricTerm> random_scan_lower_terms(int n);
std::vector<GeometricTerm> random_scan_upper_terms(int n);
std::vector<GeometricTerm> systematic_upper_terms(int n, SystematicScan which);

StepCount random_scan_lower_min_steps(int n, double target);
StepCount random_scan_upper_min_steps(int n, double target);
StepCount systematic_upper_min_steps(int n, double target, SystematicScan which);

/// ln(1 - 2/(n+2)) / ln(random_scan_rate(n)): systematic-sweep rate against
/// random-scan step rate.
double scan_time_ratio(int n);

/// Same comparison with the systematic rate taken per coordinate update
/// (one sweep is two updates).
double scan_time_ratio_per_update(int n);

// ---------------------------------------------------------------------------
// Chi-square start-dependent bound: sqrt(1/m(j)) lambda2^l
// ---------------------------------------------------------------------------

BoundValue chisq_bound(const Distribution& stationary, double second_eigenvalue, int start, const StepCount& steps);
StepCount chisq_bound_min_steps(const Distribution& stationary, double second_eigenvalue, int start, double target);

/// Poisson-gamma (shape = rate = 1) instance with lambda2 = 1/2.
BoundValue chisq_bound_pg(const Distribution& stationary, int start, const StepCount& steps);

// ---------------------------------------------------------------------------

/// A bound as a function of the step count, valid from `valid_from` on.
struct BoundCurve {
  std::function<LogMagnitude(const StepCount&)> evaluate;
  StepCount valid_from;
  std::string label;
};

BoundCurve rosenthal_curve(const DriftMinorization& cert, const RosenthalParams& params);
BoundCurve two_term_curve(double a, double b, double weight);
BoundCurve random_scan_upper_curve(int n);
BoundCurve random_scan_lower_curve(int n);
BoundCurve systematic_upper_curve(int n, SystematicScan which);

}  // namespace gibbsrate
