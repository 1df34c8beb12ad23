#include "gibbsrate/bounds.hpp"

#include <cmath>
#include <string>

namespace gibbsrate {

namespace {

void require_n(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "n must be >= 1");
}

void require_target(double target) {
  if (!(target > 0.0 && target < 1.0)) throw Error(Errc::invalid_argument, "target must lie in (0, 1)");
}

bool starts_below_half(std::optional<double> theta0) { return theta0 && *theta0 < 0.5; }

BoundValue as_bound(LogMagnitude v, bool warning = false) {
  const double value = v.value();
  return {value, value >= 1.0, warning};
}

StepCount at_least(StepCount found, std::uint64_t threshold) {
  const StepCount t(threshold);
  return found < t ? t : found;
}

double systematic_rate_log(int n) { return std::log1p(-2.0 / (n + 2.0)); }

}  // namespace

RosenthalConstants rosenthal_constants(const DriftMinorization& cert, const RosenthalParams& params) {
  const double d_min = 2.0 * cert.b / (1.0 - cert.lambda);
  if (!std::isfinite(params.d) || params.d < d_min) {
    throw Error(Errc::invalid_d, "d = " + std::to_string(params.d) + " is below 2b/(1 - lambda) = " +
                                     std::to_string(d_min));
  }
  if (!(params.r > 0.0 && params.r < 1.0)) throw Error(Errc::invalid_r, "r must lie in (0, 1)");
  RosenthalConstants c;
  c.rosenthal_alpha = (1.0 + params.d) / (1.0 + 2.0 * cert.b + cert.lambda * params.d);
  c.u = 1.0 + 2.0 * (cert.lambda * params.d + cert.b);
  c.log_contraction = params.r * std::log(c.u) - (1.0 - params.r) * std::log(c.rosenthal_alpha);
  c.drift_coefficient = 1.0 + cert.b / (1.0 - cert.lambda) + cert.v_x0;
  return c;
}

std::vector<GeometricTerm> rosenthal_terms(const DriftMinorization& cert, const RosenthalParams& params) {
  const auto c = rosenthal_constants(cert, params);
  if (c.log_contraction > 0.0) {
    throw Error(Errc::non_contracting, "u^r / alpha^(1-r) exceeds 1 for d = " + std::to_string(params.d) +
                                           ", r = " + std::to_string(params.r));
  }
  // (1 - eps)^{r l}: log1p keeps eps = 2^-100 from vanishing against 1.
  const double log_one_minus_eps = log1m(cert.epsilon.value());
  return {
      GeometricTerm::from_log_ratio(LogMagnitude::one(), params.r * log_one_minus_eps),
      GeometricTerm::from_log_ratio(LogMagnitude::from_value(c.drift_coefficient), c.log_contraction),
  };
}

RosenthalEvaluation rosenthal_bound(const DriftMinorization& cert, const RosenthalParams& params,
                                    const StepCount& steps) {
  const auto terms = rosenthal_terms(cert, params);
  RosenthalEvaluation e;
  e.coupling_term = evaluate_geometric(std::span(terms).first(1), steps);
  e.drift_term = evaluate_geometric(std::span(terms).last(1), steps);
  e.value = e.coupling_term + e.drift_term;
  e.non_contracting = terms[1].log_ratio == 0.0;
  e.vacuous = e.value >= LogMagnitude::one();
  return e;
}

StepCount rosenthal_min_steps(const DriftMinorization& cert, const RosenthalParams& params, double target) {
  require_target(target);
  const auto terms = rosenthal_terms(cert, params);
  if (terms[1].log_ratio == 0.0) {
    throw Error(Errc::non_contracting, "u^r / alpha^(1-r) equals 1; the drift term never decays");
  }
  return min_steps_geometric(terms, LogMagnitude::from_value(target));
}

GridOptimum rosenthal_grid_optimize(const DriftMinorization& cert, double target, std::span<const double> d_grid,
                                    std::span<const double> r_grid) {
  require_target(target);
  if (d_grid.empty() || r_grid.empty()) throw Error(Errc::empty_feasible_grid, "empty parameter grid");
  std::optional<GridOptimum> best;
  std::vector<GridPoint> skipped;
  for (double d : d_grid) {
    for (double r : r_grid) {
      const RosenthalParams p{d, r};
      try {
        StepCount steps = rosenthal_min_steps(cert, p, target);
        const bool better = !best || steps < best->steps ||
                            (steps == best->steps &&
                             (d < best->best.d || (d == best->best.d && r < best->best.r)));
        if (better) best = GridOptimum{p, std::move(steps), {}};
      } catch (const Error& e) {
        switch (e.code()) {
          case Errc::invalid_d:
          case Errc::invalid_r:
          case Errc::non_contracting:
          case Errc::no_solution:
            skipped.push_back({p, e.code()});
            break;
          default:
            throw;
        }
      }
    }
  }
  if (!best) throw Error(Errc::empty_feasible_grid, "no grid point satisfies the constraints");
  best->skipped = std::move(skipped);
  return *best;
}

namespace {

std::vector<GeometricTerm> two_term_terms(double a, double b, double weight) {
  if (!(a >= 0.0 && a < 1.0) || !(b >= 0.0 && b < 1.0)) {
    throw Error(Errc::invalid_ratio, "two-term ratios must lie in [0, 1)");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw Error(Errc::invalid_argument, "weight must be >= 0");
  return {GeometricTerm::from_ratio(LogMagnitude::one(), a),
          GeometricTerm::from_ratio(LogMagnitude::from_value(weight), b)};
}

}  // namespace

double two_term_bound(double a, double b, double weight, const StepCount& steps) {
  return evaluate_geometric(two_term_terms(a, b, weight), steps).value();
}

StepCount two_term_min_steps(double a, double b, double weight, double target) {
  if (!(target > 0.0)) throw Error(Errc::invalid_argument, "target must be positive");
  return min_steps_geometric(two_term_terms(a, b, weight), LogMagnitude::from_value(target));
}

std::uint64_t random_scan_upper_threshold(int n) {
  require_n(n);
  return (3ULL * static_cast<std::uint64_t>(n) + 3) / 4;
}

std::uint64_t systematic_threshold(int n) {
  require_n(n);
  return (3ULL * static_cast<std::uint64_t>(n) + 15) / 16;
}

double random_scan_rate(int n) {
  require_n(n);
  return 0.5 + 0.5 * std::sqrt(1.0 - 2.0 / (n + 2.0));
}

std::vector<GeometricTerm> random_scan_lower_terms(int n) {
  require_n(n);
  return {GeometricTerm::from_log_ratio(LogMagnitude::from_value(1.0 / 3.0), std::log1p(-1.0 / (n + 2.0)))};
}

std::vector<GeometricTerm> random_scan_upper_terms(int n) {
  require_n(n);
  const double scale = 10.0 * std::sqrt((n + 2.0) / n);
  return {
      GeometricTerm::from_log_ratio(LogMagnitude::from_value(3.0), -1.0 / 8.0, -1.0),
      GeometricTerm::from_log_ratio(LogMagnitude::from_value(scale), std::log(random_scan_rate(n)), -1.0),
  };
}

std::vector<GeometricTerm> systematic_upper_terms(int n, SystematicScan which) {
  require_n(n);
  const double offset = which == SystematicScan::ktilde ? -0.5 : 0.0;
  return {GeometricTerm::from_log_ratio(LogMagnitude::from_value(10.0), systematic_rate_log(n), offset)};
}

BoundValue random_scan_lower(int n, const StepCount& steps, std::optional<double> theta0) {
  require_n(n);
  if (steps < StepCount(1)) throw Error(Errc::below_validity, "the random-scan lower bound needs l >= 1");
  return as_bound(evaluate_geometric(random_scan_lower_terms(n), steps), starts_below_half(theta0));
}

BoundValue random_scan_upper(int n, const StepCount& steps, std::optional<double> theta0) {
  const auto threshold = random_scan_upper_threshold(n);
  if (steps < StepCount(threshold)) {
    throw Error(Errc::below_validity, "random-scan upper bound needs l >= " + std::to_string(threshold));
  }
  return as_bound(evaluate_geometric(random_scan_upper_terms(n), steps), starts_below_half(theta0));
}

BoundValue systematic_upper(int n, const StepCount& steps, SystematicScan which) {
  const auto threshold = systematic_threshold(n);
  if (steps < StepCount(threshold)) {
    throw Error(Errc::below_validity, "systematic-scan bound needs l >= " + std::to_string(threshold));
  }
  return as_bound(evaluate_geometric(systematic_upper_terms(n, which), steps));
}

StepCount random_scan_lower_min_steps(int n, double target) {
  require_target(target);
  return at_least(min_steps_geometric(random_scan_lower_terms(n), LogMagnitude::from_value(target)), 1);
}

StepCount random_scan_upper_min_steps(int n, double target) {
  require_target(target);
  return at_least(min_steps_geometric(random_scan_upper_terms(n), LogMagnitude::from_value(target)),
                  random_scan_upper_threshold(n));
}

StepCount systematic_upper_min_steps(int n, double target, SystematicScan which) {
  require_target(target);
  return at_least(min_steps_geometric(systematic_upper_terms(n, which), LogMagnitude::from_value(target)),
                  systematic_threshold(n));
}

double scan_time_ratio(int n) { return systematic_rate_log(n) / std::log(random_scan_rate(n)); }

double scan_time_ratio_per_update(int n) { return 0.5 * systematic_rate_log(n) / std::log(random_scan_rate(n)); }

namespace {

std::vector<GeometricTerm> chisq_terms(const Distribution& stationary, double second_eigenvalue, int start) {
  if (start < 0 || static_cast<std::size_t>(start) >= stationary.size()) {
    throw Error(Errc::range, "start state beyond the truncated state space");
  }
  const double m = stationary[static_cast<std::size_t>(start)];
  if (!(m > 0.0)) throw Error(Errc::domain, "start state has zero stationary mass");
  return {GeometricTerm::from_ratio(LogMagnitude::from_log(-0.5 * std::log(m)), second_eigenvalue)};
}

}  // namespace

BoundValue chisq_bound(const Distribution& stationary, double second_eigenvalue, int start, const StepCount& steps) {
  return as_bound(evaluate_geometric(chisq_terms(stationary, second_eigenvalue, start), steps));
}

StepCount chisq_bound_min_steps(const Distribution& stationary, double second_eigenvalue, int start,
                                double target) {
  require_target(target);
  return min_steps_geometric(chisq_terms(stationary, second_eigenvalue, start), LogMagnitude::from_value(target));
}

BoundValue chisq_bound_pg(const Distribution& stationary, int start, const StepCount& steps) {
  return chisq_bound(stationary, 0.5, start, steps);
}

namespace {

BoundCurve curve_from_terms(std::vector<GeometricTerm> terms, StepCount valid_from, std::string label) {
  return {[terms = std::move(terms)](const StepCount& l) { return evaluate_geometric(terms, l); },
          std::move(valid_from), std::move(label)};
}

}  // namespace

BoundCurve rosenthal_curve(const DriftMinorization& cert, const RosenthalParams& params) {
  return curve_from_terms(rosenthal_terms(cert, params), StepCount(0), "drift/minorization bound");
}

BoundCurve two_term_curve(double a, double b, double weight) {
  return curve_from_terms(two_term_terms(a, b, weight), StepCount(0), "two-term geometric bound");
}

BoundCurve random_scan_upper_curve(int n) {
  return curve_from_terms(random_scan_upper_terms(n), StepCount(random_scan_upper_threshold(n)),
                          "random-scan upper bound");
}

BoundCurve random_scan_lower_curve(int n) {
  return curve_from_terms(random_scan_lower_terms(n), StepCount(1), "random-scan lower bound");
}

BoundCurve systematic_upper_curve(int n, SystematicScan which) {
  return curve_from_terms(systematic_upper_terms(n, which), StepCount(systematic_threshold(n)),
                          which == SystematicScan::k ? "systematic-scan bound (K)" : "systematic-scan bound (K-tilde)");
}

}  // namespace gibbsrate
