#include "gibbsrate/scan_compare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "gibbsrate/sampler.hpp"
#include "gibbsrate/spectral.hpp"
#include "gibbsrate/words.hpp"

namespace gibbsrate {

namespace {

constexpr std::uint64_t kMaxRebuildSteps = 10'000;
constexpr double kRebuildTolerance = 1e-9;
constexpr double kFloatingFloor = 1e-13;

const CollapseCensus& cached_census(int length) {
  static std::mutex mutex;
  static std::array<std::optional<CollapseCensus>, kMaxEnumeratedLength + 1> cache;
  const std::scoped_lock lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(length)];
  if (!slot) slot = collapse_census(length);
  return *slot;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

std::uint64_t to_u64_or_throw(const StepCount& s) {
  const auto v = s.to_u64();
  if (!v) throw Error(Errc::too_large, "step count exceeds 64 bits");
  return *v;
}

}  // namespace

RebuiltUpperBound rebuild_random_scan_upper(int n, const StepCount& steps) {
  const auto threshold = random_scan_upper_threshold(n);
  if (steps < StepCount(threshold)) {
    throw Error(Errc::below_validity, "rebuild needs l >= " + std::to_string(threshold));
  }
  if (steps > StepCount(kMaxRebuildSteps)) throw Error(Errc::too_large, "rebuild sums at most 10^4 terms");
  const std::uint64_t l = to_u64_or_throw(steps);

  RebuiltUpperBound out;
  out.n = n;
  out.steps = l;
  out.counts_from_enumeration = l <= static_cast<std::uint64_t>(kMaxEnumeratedLength);
  const double log_s = 0.5 * std::log(n / (n + 2.0));
  const double scale = 10.0 * std::sqrt((n + 2.0) / n);
  const double log_two = std::log(2.0);

  double log_full = -std::numeric_limits<double>::infinity();
  double log_above = log_full;
  for (std::uint64_t m = 1; m <= l; ++m) {
    double log_count = 0.0;
    if (out.counts_from_enumeration) {
      const auto& census = cached_census(static_cast<int>(l));
      const auto c1 = census.count({Letter::P1, static_cast<int>(m)});
      const auto c2 = census.count({Letter::P2, static_cast<int>(m)});
      if (c1 != c2) throw Error(Errc::rebuild_mismatch, "census is not symmetric in the first letter");
      log_count = std::log(static_cast<double>(c1));
    } else {
      log_count = log_choose(l - 1, m - 1);
    }
    // Both starting letters, weight 2^-l each, each collapsed word bounded by scale * s^{m-1}.
    const double log_term = log_two + log_count - static_cast<double>(l) * log_two + static_cast<double>(m - 1) * log_s;
    log_full = log_sum_exp(log_full, log_term);
    if (4 * m > l) log_above = log_sum_exp(log_above, log_term);
  }
  out.azuma_term = 3.0 * std::exp(-(static_cast<double>(l) - 1.0) / 8.0);
  out.census_term = scale * std::exp(log_full);
  out.census_term_above_quarter = scale * std::exp(log_above);
  out.total = out.azuma_term + out.census_term;
  out.closed_form = random_scan_upper(n, steps).value;
  out.relative_gap = std::abs(out.total - out.closed_form) / out.closed_form;
  out.matches = out.relative_gap <= kRebuildTolerance;
  return out;
}

std::optional<std::uint64_t> worst_start_min_steps(const XChain& chain, double target, std::uint64_t cap) {
  if (!(target > 0.0 && target < 1.0)) throw Error(Errc::invalid_argument, "target must lie in (0, 1)");
  const auto& k = chain.kernel.entries();
  const auto& pi = chain.stationary;
  if (chain.kernel.dim() <= kIteratedDimLimit) {
    if (invariance_defect(chain.kernel, pi) > 1e-10) {
      throw Error(Errc::non_invariant, "stationary vector is not invariant for the kernel");
    }
    const auto d = k.rows();
    Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd next(d, d);
    for (std::uint64_t l = 0; l <= cap; ++l) {
      const double worst = 0.5 * (rows.rowwise() - pi.row()).cwiseAbs().rowwise().sum().maxCoeff();
      if (worst <= target) return l;
      next.noalias() = rows * k;
      rows.swap(next);
    }
    return std::nullopt;
  }
  const auto system = reversible_eigensystem(chain.kernel, pi);
  auto fits = [&](std::uint64_t l) { return spectral_worst_start_tv(system, static_cast<double>(l)) <= target; };
  if (fits(0)) return 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 1;
  while (!fits(hi)) {
    lo = hi;
    if (hi >= cap) return std::nullopt;
    hi = std::min(cap, hi * 2);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (fits(mid) ? hi : lo) = mid;
  }
  return hi;
}

ComparisonReport compare(int n, std::uint64_t max_steps, double target, const CompareOptions& options) {
  if (n < 1 || n > kMaxCompareN) throw Error(Errc::infeasible_n, "exact comparison supports 1 <= n <= 2000");
  if (!(target > 0.0 && target < 1.0)) throw Error(Errc::invalid_argument, "target must lie in (0, 1)");
  if (max_steps < 1) throw Error(Errc::invalid_argument, "need at least one step");
  if (options.stride < 1) throw Error(Errc::invalid_argument, "row stride must be >= 1");

  const BetaBinomialFamily family(n);
  const XChain chain = bb_xchain(family);
  const auto system = reversible_eigensystem(chain.kernel, chain.stationary);

  ComparisonReport report;
  report.n = n;
  report.target = target;
  report.max_steps = max_steps;
  report.second_eigenvalue = system.values(1);
  report.random_scan_eigenvalue = scan_eigenvalue_pair(0.5, n / (n + 2.0)).first;
  report.rosenthal = options.rosenthal;

  const bool iterate = chain.kernel.dim() <= kIteratedDimLimit;
  std::vector<double> curve;
  if (iterate) curve = worst_start_tv_curve(chain.kernel, chain.stationary, max_steps);

  const auto sys_threshold = systematic_threshold(n);
  const auto rand_threshold = random_scan_upper_threshold(n);
  for (std::uint64_t l = 1; l <= max_steps; l += options.stride) {
    const StepCount steps(l);
    ComparisonRow row;
    row.steps = l;
    row.exact_tv_systematic =
        iterate ? curve[static_cast<std::size_t>(l)] : spectral_worst_start_tv(system, static_cast<double>(l));
    if (l >= sys_threshold) row.systematic_bound = systematic_upper(n, steps, SystematicScan::k).value;
    row.random_lower = random_scan_lower(n, steps).value;
    if (l >= rand_threshold) row.random_upper = random_scan_upper(n, steps).value;
    row.eigen_lower = test_function_lower_bound(report.second_eigenvalue, steps, 1.0);
    report.rows.push_back(row);
  }

  auto& ms = report.min_steps;
  ms.exact_systematic = worst_start_min_steps(chain, target);
  ms.eigen_lower_systematic = to_u64_or_throw(min_steps_geometric(
      std::vector{GeometricTerm::from_ratio(LogMagnitude::from_value(0.5), std::abs(report.second_eigenvalue))},
      LogMagnitude::from_value(target)));
  ms.systematic_bound = to_u64_or_throw(systematic_upper_min_steps(n, target, SystematicScan::k));
  ms.random_scan_upper = to_u64_or_throw(random_scan_upper_min_steps(n, target));
  ms.random_scan_lower = to_u64_or_throw(random_scan_lower_min_steps(n, target));
  ms.random_to_systematic =
      static_cast<double>(ms.random_scan_upper) / static_cast<double>(ms.systematic_bound);

  if (options.rosenthal) {
    try {
      const auto cert = bb_drift_minorization(family, options.rosenthal_x0);
      ms.rosenthal = rosenthal_min_steps(cert, *options.rosenthal, target);
      if (ms.exact_systematic && *ms.exact_systematic > 0) {
        ms.rosenthal_log10_excess = ms.rosenthal->log10() - std::log10(static_cast<double>(*ms.exact_systematic));
      }
    } catch (const Error& e) {
      report.notes.push_back(std::string("drift/minorization bound unavailable: ") + e.what());
    }
  }

  if (options.mc_samples > 0) {
    const JointState s0{0, 1.0};
    const double phi0 = bb_eigenfunction_phi(family, 0.0, 1.0);
    for (std::size_t i = 0; i < options.mc_steps.size(); ++i) {
      const auto l = options.mc_steps[i];
      const auto est = eigenfunction_decay(family, s0, 0.5, l, options.mc_samples, options.seed + i, options.threads);
      MonteCarloCell cell;
      cell.steps = l;
      cell.estimate = est.estimate;
      cell.std_error = est.std_error;
      cell.predicted = std::pow(report.random_scan_eigenvalue, static_cast<double>(l)) * phi0;
      cell.within_three_se = std::abs(cell.estimate - cell.predicted) <= 3.0 * cell.std_error + 1e-12;
      report.monte_carlo.push_back(cell);
    }
    report.notes.push_back(
        "monte_carlo cells are statistical: mean of phi(X_l, Theta_l) over random-scan trajectories from "
        "(x, theta) = (0, 1), against lambda^l phi(0, 1)");
  }

  report.notes.push_back(
      "exact_tv_systematic is the worst start over x of the marginal x-chain of a full systematic sweep; "
      "the random-scan bounds concern the joint chain started with theta >= 1/2");
  report.notes.push_back(
      "eigen_lower is |lambda2|^l / 2, the test-function lower bound with the numeric second eigenvector");
  report.notes.push_back(iterate ? "exact TV from iterated matrix powers"
                                 : "exact TV from the spectral expansion (state space above 401 states)");
  return report;
}

std::vector<std::string> validate_report(const ComparisonReport& report) {
  std::vector<std::string> problems;
  for (const auto& row : report.rows) {
    const std::string at = "l=" + std::to_string(row.steps) + ": ";
    if (row.exact_tv_systematic) {
      if (row.eigen_lower > *row.exact_tv_systematic + kFloatingFloor) {
        problems.push_back(at + "eigen lower bound exceeds exact TV");
      }
      if (row.systematic_bound && *row.exact_tv_systematic > *row.systematic_bound + kFloatingFloor) {
        problems.push_back(at + "exact TV exceeds the systematic bound");
      }
    }
    if (row.random_upper && *row.random_upper < 1.0 && row.random_lower > *row.random_upper + kFloatingFloor) {
      problems.push_back(at + "random-scan lower bound exceeds the upper bound");
    }
  }
  return problems;
}

PgDemo pg_mixing_demo(std::span<const int> starts, double target, int x_max) {
  if (starts.empty()) throw Error(Errc::invalid_argument, "no start states given");
  if (!(target > 0.0 && target < 1.0)) throw Error(Errc::invalid_argument, "target must lie in (0, 1)");
  const int max_start = *std::max_element(starts.begin(), starts.end());
  if (*std::min_element(starts.begin(), starts.end()) < 0 || max_start > x_max) {
    throw Error(Errc::invalid_state, "start states must lie in [0, x_max]");
  }
  const PoissonGammaFamily family(1.0, 1.0, x_max, max_start);
  const XChain chain = pg_xchain(family);

  PgDemo demo;
  demo.target = target;
  demo.x_max = x_max;
  demo.second_eigenvalue = reversible_spectrum(chain.kernel, chain.stationary).at(1);
  std::vector<double> geometric(static_cast<std::size_t>(x_max) + 1);
  for (std::size_t x = 0; x < geometric.size(); ++x) geometric[x] = std::ldexp(1.0, -static_cast<int>(x) - 1);
  demo.stationary_tv_to_geometric = tv_distance(chain.stationary, Distribution::normalized(std::move(geometric)));

  const auto& k = chain.kernel.entries();
  constexpr std::uint64_t kCap = 1'000'000;
  for (int j : starts) {
    PgDemoRow row;
    row.start = j;
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(k.rows());
    v(j) = 1.0;
    Eigen::RowVectorXd next(k.rows());
    std::uint64_t l = 0;
    while (0.5 * (v - chain.stationary.row()).cwiseAbs().sum() > target) {
      if (++l > kCap) throw Error(Errc::non_convergence, "exact chain did not reach the target");
      next.noalias() = v * k;
      v.swap(next);
    }
    row.exact_min_steps = l;
    row.chisq_min_steps = to_u64_or_throw(chisq_bound_min_steps(chain.stationary, 0.5, j, target));
    demo.rows.push_back(row);
  }
  return demo;
}

}  // namespace gibbsrate
