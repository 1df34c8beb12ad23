#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gibbsrate/errors.hpp"
#include "gibbsrate/scan_compare.hpp"
#include "gibbsrate/stochastic.hpp"
#include "json.hpp"

using namespace gibbsrate;
using doctest::Approx;

TEST_CASE("rebuilt upper bound matches the closed form") {
  const auto r = rebuild_random_scan_upper(4, StepCount(3));
  CHECK(r.matches);
  CHECK(r.counts_from_enumeration);
  CHECK(r.total == Approx(r.closed_form).epsilon(1e-9));
  // Binomial identity: sum_m C(l-1, m-1) x^{m-1} 2^{-(l-1)} = ((1 + x)/2)^{l-1}.
  const double x = std::sqrt(4.0 / 6.0);
  CHECK(r.census_term == Approx(10 * std::sqrt(1.5) * std::pow((1 + x) / 2, 2)).epsilon(1e-12));
  CHECK(r.census_term_above_quarter <= r.census_term);

  const auto single = rebuild_random_scan_upper(1, StepCount(1));
  CHECK(single.matches);
  CHECK(single.census_term == Approx(10 * std::sqrt(3.0)));
}

TEST_CASE("rebuilt upper bound across lengths") {
  for (int n : {2, 9, 25, 40}) {
    for (auto l = random_scan_upper_threshold(n); l <= 200; l += 7) {
      const auto r = rebuild_random_scan_upper(n, StepCount(l));
      CHECK(r.relative_gap <= 1e-9);
      CHECK(r.counts_from_enumeration == (l <= 20));
    }
  }
  CHECK_THROWS_AS(rebuild_random_scan_upper(4, StepCount(2)), Error);
  CHECK_THROWS_AS(rebuild_random_scan_upper(4, StepCount(20000)), Error);
}

TEST_CASE("comparison report for one hundred trials") {
  CompareOptions options;
  const auto report = compare(100, 300, 0.01, options);
  CHECK(report.rows.size() == 300);
  CHECK(report.second_eigenvalue == Approx(100.0 / 102));
  CHECK(report.random_scan_eigenvalue == Approx(0.5 + 0.5 * std::sqrt(100.0 / 102)));
  REQUIRE(report.min_steps.exact_systematic.has_value());
  CHECK(*report.min_steps.exact_systematic >= 150);
  CHECK(*report.min_steps.exact_systematic <= 400);
  REQUIRE(report.min_steps.rosenthal.has_value());
  CHECK(report.min_steps.rosenthal->log10() >= 30.0);
  CHECK(*report.min_steps.rosenthal_log10_excess >= 30.0);
  CHECK(report.min_steps.eigen_lower_systematic <= *report.min_steps.exact_systematic);
  CHECK(*report.min_steps.exact_systematic <= report.min_steps.systematic_bound);
  CHECK(report.min_steps.random_scan_lower <= report.min_steps.random_scan_upper);
  CHECK(validate_report(report).empty());
  CHECK(report.monte_carlo.empty());
}

TEST_CASE("random to systematic bound step ratio") {
  // Bound-implied steps differ by about the rate ratio, which tends to 4.
  for (int n : {50, 100, 200}) {
    const auto report = compare(n, 5, 0.01);
    const auto& ms = report.min_steps;
    CHECK(ms.random_to_systematic == Approx(static_cast<double>(ms.random_scan_upper) / ms.systematic_bound));
    CHECK(ms.random_to_systematic > 3.5);
    CHECK(ms.random_to_systematic < 4.5);
  }
}

TEST_CASE("two-state comparison is exact") {
  const auto report = compare(1, 30, 0.01);
  for (const auto& row : report.rows) {
    CHECK(*row.exact_tv_systematic == Approx(0.5 * std::pow(1.0 / 3, static_cast<double>(row.steps))).epsilon(1e-10));
  }
  CHECK(validate_report(report).empty());
}

TEST_CASE("comparison reports satisfy row ordering") {
  for (int n : {2, 5, 17, 60}) {
    CompareOptions options;
    options.stride = 3;
    const auto report = compare(n, 250, 0.05, options);
    CHECK(validate_report(report).empty());
    for (const auto& row : report.rows) {
      if (row.systematic_bound) CHECK(*row.exact_tv_systematic <= *row.systematic_bound + 1e-13);
      CHECK(row.eigen_lower <= *row.exact_tv_systematic + 1e-13);
    }
  }
}

TEST_CASE("report validation flags violations") {
  ComparisonReport report;
  ComparisonRow row;
  row.steps = 4;
  row.exact_tv_systematic = 0.5;
  row.systematic_bound = 0.1;
  row.eigen_lower = 0.6;
  row.random_lower = 0.4;
  row.random_upper = 0.2;
  report.rows.push_back(row);
  CHECK(validate_report(report).size() == 3);
}

TEST_CASE("comparison errors") {
  CHECK_THROWS_AS(compare(0, 10, 0.01), Error);
  try {
    compare(2001, 10, 0.01);
    FAIL("expected infeasible n");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_n);
  }
  CHECK_THROWS_AS(compare(10, 10, 1.5), Error);
  CHECK_THROWS_AS(compare(10, 0, 0.01), Error);
}

TEST_CASE("spectral and iterated minimal steps agree") {
  const auto chain = bb_xchain(BetaBinomialFamily(450));
  const auto spectral = worst_start_min_steps(chain, 0.05);
  REQUIRE(spectral.has_value());
  const auto curve = worst_start_tv_curve(chain.kernel, chain.stationary, *spectral);
  CHECK(curve[*spectral] <= 0.05);
  CHECK(curve[*spectral - 1] > 0.05);
}

TEST_CASE("Monte Carlo cells in the comparison report") {
  CompareOptions options;
  options.rosenthal.reset();
  options.mc_samples = 20'000;
  options.mc_steps = {1, 3, 8};
  const auto report = compare(10, 5, 0.01, options);
  REQUIRE(report.monte_carlo.size() == 3);
  for (const auto& cell : report.monte_carlo) {
    CHECK(cell.std_error > 0.0);
    CHECK(cell.within_three_se);
  }
  CHECK_FALSE(report.min_steps.rosenthal.has_value());
}

TEST_CASE("Poisson/gamma demo") {
  const std::vector<int> starts{0, 8, 16, 32, 64, 128};
  const auto demo = pg_mixing_demo(starts, 0.01);
  REQUIRE(demo.rows.size() == starts.size());
  CHECK(demo.rows[0].exact_min_steps < 10);
  CHECK(demo.rows[0].chisq_min_steps < 10);
  for (std::size_t i = 2; i < demo.rows.size(); ++i) {
    CHECK(demo.rows[i].exact_min_steps - demo.rows[i - 1].exact_min_steps <= 3);
  }
  CHECK(4 * demo.rows.back().exact_min_steps < demo.rows.back().chisq_min_steps);
  CHECK(demo.second_eigenvalue == Approx(0.5).epsilon(1e-6));
  CHECK(demo.stationary_tv_to_geometric < 1e-8);
  const std::vector<int> outside{401};
  CHECK_THROWS_AS(pg_mixing_demo(outside, 0.01), Error);
}

TEST_CASE("report serialization") {
  CompareOptions options;
  options.stride = 10;
  const auto report = compare(8, 40, 0.01, options);
  const auto text = to_json(report);
  CHECK(text == to_json(compare(8, 40, 0.01, options)));
  const auto j = nlohmann::json::parse(text);
  CHECK(j["n"] == 8);
  CHECK(j["rows"].size() == 4);
  CHECK(j["min_steps"]["rosenthal"]["value"].is_string());
  const auto csv = to_csv(report);
  CHECK(csv.rfind("steps,exact_tv_systematic,systematic_bound,random_lower,random_upper,eigen_lower\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  const std::vector<int> starts{0, 4};
  const auto demo = pg_mixing_demo(starts, 0.01);
  CHECK(nlohmann::json::parse(to_json(demo))["rows"].size() == 2);
  CHECK(to_csv(demo).rfind("start,exact_min_steps,chisq_min_steps\n", 0) == 0);
}
