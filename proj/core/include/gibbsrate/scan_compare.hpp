#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbsrate/bounds.hpp"
#include "gibbsrate/families.hpp"
#include "gibbsrate/step_count.hpp"

namespace gibbsrate {

/// The random-scan upper bound rebuilt from its ingredients: the census of
/// reduced words (each alternating word of length m appears C(l-1, m-1)
/// times per starting letter), the systematic bound applied to every
/// collapsed word, and the Azuma tail term.
struct RebuiltUpperBound {
  int n = 0;
  std::uint64_t steps = 0;
  double azuma_term = 0.0;
  /// 10 sqrt((n+2)/n) * sum_m census_m / 2^l * s^{m-1}, s = sqrt(n/(n+2)).
  double census_term = 0.0;
  /// Same sum restricted to reduced lengths m > l/4.
  double census_term_above_quarter = 0.0;
  double total = 0.0;
  double closed_form = 0.0;
  double relative_gap = 0.0;
  bool counts_from_enumeration = false;
  bool matches = false;  // relative_gap <= 1e-9
};

/// Requires ceil(3n/4) <= l <= 10^4. Counts come from exhaustive enumeration
/// for l <= 20 and from the binomial count formula beyond.
RebuiltUpperBound rebuild_random_scan_upper(int n, const StepCount& steps);

/// Worst-start exact TV of the beta/binomial x-chain. Iterates matrix powers
/// for up to kIteratedDimLimit states and uses the spectral expansion above.
inline constexpr std::size_t kIteratedDimLimit = 400;

struct ComparisonRow {
  std::uint64_t steps = 0;
  std::optional<double> exact_tv_systematic;
  std::optional<double> systematic_bound;
  double random_lower = 0.0;
  std::optional<double> random_upper;
  double eigen_lower = 0.0;
};

struct MinStepsSummary {
  std::optional<std::uint64_t> exact_systematic;
  std::uint64_t eigen_lower_systematic = 0;
  std::uint64_t systematic_bound = 0;
  std::uint64_t random_scan_upper = 0;
  std::uint64_t random_scan_lower = 0;
  std::optional<StepCount> rosenthal;
  /// random_scan_upper / systematic_bound
  double random_to_systematic = 0.0;
  /// log10(rosenthal / exact_systematic) when both exist.
  std::optional<double> rosenthal_log10_excess;
};

/// Statistical cell: Monte Carlo eigenfunction decay under the random scan.
struct MonteCarloCell {
  std::uint64_t steps = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double predicted = 0.0;
  bool within_three_se = false;
};

struct CompareOptions {
  std::optional<RosenthalParams> rosenthal = RosenthalParams{1000.0, 0.001};
  int rosenthal_x0 = 0;
  std::uint64_t stride = 1;
  std::size_t mc_samples = 0;  // 0 disables the Monte Carlo section
  std::vector<std::uint64_t> mc_steps{1, 2, 5, 10, 20};
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct ComparisonReport {
  int n = 0;
  double target = 0.0;
  std::uint64_t max_steps = 0;
  double second_eigenvalue = 0.0;
  double random_scan_eigenvalue = 0.0;
  std::optional<RosenthalParams> rosenthal;
  std::vector<ComparisonRow> rows;
  MinStepsSummary min_steps;
  std::vector<MonteCarloCell> monte_carlo;
  std::vector<std::string> notes;
};

inline constexpr int kMaxCompareN = 2000;

ComparisonReport compare(int n, std::uint64_t max_steps, double target, const CompareOptions& options = {});

/// Row-ordering violations (eigen_lower <= exact <= systematic bound, and
/// random lower <= random upper whenever the upper bound is below 1), with
/// 1e-13 absolute slack for the floating-point floor. Empty when valid.
std::vector<std::string> validate_report(const ComparisonReport& report);

/// Minimal l with worst-start TV <= target for the given reversible chain.
std::optional<std::uint64_t> worst_start_min_steps(const XChain& chain, double target, std::uint64_t cap = 1'000'000);

struct PgDemoRow {
  int start = 0;
  std::uint64_t exact_min_steps = 0;
  std::uint64_t chisq_min_steps = 0;
};

struct PgDemo {
  double target = 0.0;
  int x_max = 0;
  double second_eigenvalue = 0.0;
  double stationary_tv_to_geometric = 0.0;
  std::vector<PgDemoRow> rows;
};

/// Poisson-gamma (shape = rate = 1) chain truncated at x_max: exact minimal
/// steps from each start against the steps implied by the chi-square bound.
PgDemo pg_mixing_demo(std::span<const int> starts, double target, int x_max = 400);

std::string to_json(const ComparisonReport& report);
std::string to_csv(const ComparisonReport& report);
std::string to_json(const PgDemo& demo);
std::string to_csv(const PgDemo& demo);

}  // namespace gibbsrate
