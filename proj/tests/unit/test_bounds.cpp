#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "doctest.h"
#include "gibbsrate/bounds.hpp"
#include "gibbsrate/errors.hpp"
#include "gibbsrate/families.hpp"
#include "gibbsrate/stochastic.hpp"

using namespace gibbsrate;
using doctest::Approx;
using Dec = boost::multiprecision::cpp_dec_float_50;

namespace {

DriftMinorization n100_certificate() {
  return {100.0 / 102.0, 100.0 / 102.0, LogMagnitude::from_log(-100.0 * std::log(2.0)), 0.0};
}

// Independent 50-digit evaluation of the drift/minorization bound.
Dec rosenthal_oracle(const Dec& lambda, const Dec& b, const Dec& eps, const Dec& v0, const Dec& d, const Dec& r,
                     const Dec& steps) {
  const Dec big_a = (1 + d) / (1 + 2 * b + lambda * d);
  const Dec u = 1 + 2 * (lambda * d + b);
  const Dec ratio = pow(u, r) / pow(big_a, 1 - r);
  return pow(1 - eps, r * steps) + pow(ratio, steps) * (1 + b / (1 - lambda) + v0);
}

Dec dec(const StepCount& s) { return Dec(s.str()); }

}  // namespace

TEST_CASE("rosenthal constants") {
  const auto c = rosenthal_constants(n100_certificate(), {1000.0, 0.001});
  CHECK(c.rosenthal_alpha == Approx((1 + 1000.0) / (1 + 2 * 100.0 / 102 + 100.0 / 102 * 1000)));
  CHECK(c.u == Approx(1 + 2 * (100.0 / 102 * 1000 + 100.0 / 102)));
  CHECK(c.log_contraction < 0.0);
  CHECK_THROWS_AS(rosenthal_constants(n100_certificate(), {1000.0, 1.5}), Error);
  CHECK_THROWS_AS(rosenthal_constants(n100_certificate(), {1.0, 0.5}), Error);
}

TEST_CASE("rosenthal bound degenerate parameters") {
  const DriftMinorization cert(0.0, 0.0, LogMagnitude::from_value(0.5), 0.0);
  const auto ev = rosenthal_bound(cert, {0.0, 0.5}, StepCount(2));
  CHECK(ev.value.value() == Approx(1.5));
  CHECK(ev.non_contracting);
  CHECK(ev.vacuous);
}

TEST_CASE("rosenthal bound at zero steps") {
  const DriftMinorization cert(0.5, 0.3, LogMagnitude::from_value(0.2), 4.0);
  const auto ev = rosenthal_bound(cert, {10.0, 0.05}, StepCount(0));
  CHECK(ev.value.value() == Approx(2.0 + 0.3 / 0.5 + 4.0));
}

TEST_CASE("rosenthal bound for the hundred-trial certificate") {
  const auto cert = n100_certificate();
  const RosenthalParams p{1000.0, 0.001};
  const auto at33 = rosenthal_bound(cert, p, StepCount::pow10(33)).value.value();
  CHECK(at33 > 0.01);
  CHECK(at33 < 1.0);
  CHECK(rosenthal_bound(cert, p, StepCount::pow10(34)).value.value() < 0.01);

  const auto steps = rosenthal_min_steps(cert, p, 0.01);
  CHECK(steps.log10() >= 33.0);
  CHECK(steps.log10() <= 34.5);
  const Dec lambda = Dec(100) / 102;
  const Dec eps = pow(Dec(2), -100);
  const auto oracle = [&](const Dec& l) { return rosenthal_oracle(lambda, lambda, eps, 0, 1000, Dec("0.001"), l); };
  // At 1e33 steps a double resolves the answer to about 1e-12 relative.
  CHECK(oracle(dec(steps)) <= Dec("0.01"));
  CHECK(oracle(dec(steps) * (1 - Dec("1e-12"))) > Dec("0.01"));
}

TEST_CASE("rosenthal min steps small cases") {
  const DriftMinorization full(0.0, 0.0, LogMagnitude::one(), 0.0);
  const auto l = rosenthal_min_steps(full, {1.0, 0.9}, 0.01);
  CHECK(l <= StepCount(100));
  CHECK(rosenthal_bound(full, {1.0, 0.9}, l).value.value() <= 0.01);
  CHECK_THROWS_AS(rosenthal_min_steps(full, {0.0, 0.9}, 0.01), Error);

  const auto n1 = bb_drift_minorization(BetaBinomialFamily(1), 0);
  const auto s = rosenthal_min_steps(n1, {10.0, 0.1}, 0.01);
  auto before = s;
  --before;
  const Dec third = Dec(1) / 3;
  CHECK(rosenthal_oracle(third, third, Dec("0.5"), 0, 10, Dec("0.1"), dec(s)) <= Dec("0.01"));
  CHECK(rosenthal_oracle(third, third, Dec("0.5"), 0, 10, Dec("0.1"), dec(before)) > Dec("0.01"));
  CHECK_THROWS_AS(rosenthal_min_steps(n1, {10.0, 0.1}, 1.5), Error);
}

TEST_CASE("rosenthal bound is non-increasing in l") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const DriftMinorization cert(unit(rng), unit(rng), LogMagnitude::from_value(unit(rng)), 3.0 * unit(rng));
    const RosenthalParams p{1.0 + 50.0 * unit(rng), 0.5 * unit(rng)};
    std::vector<GeometricTerm> terms;
    try {
      terms = rosenthal_terms(cert, p);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    LogMagnitude previous = rosenthal_bound(cert, p, StepCount(0)).value;
    for (std::uint64_t l = 1; l <= 400; l += 7) {
      const auto v = rosenthal_bound(cert, p, StepCount(l)).value;
      CHECK(v.log() <= previous.log() + 1e-12);
      previous = v;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("rosenthal grid optimization") {
  const auto cert = n100_certificate();
  const std::vector<double> one_d{1000.0}, one_r{0.001};
  const auto single = rosenthal_grid_optimize(cert, 0.01, one_d, one_r);
  CHECK(single.best.d == 1000.0);
  CHECK(single.best.r == 0.001);
  CHECK(single.steps == rosenthal_min_steps(cert, {1000.0, 0.001}, 0.01));

  const std::vector<double> ds{10.0, 100.0, 1000.0, 1e4};
  const std::vector<double> rs{1e-4, 1e-3, 1e-2, 1e-1};
  const auto best = rosenthal_grid_optimize(cert, 0.01, ds, rs);
  CHECK(best.steps.log10() >= 30.0);
  CHECK_FALSE(best.skipped.empty());

  // Both d values need exactly two steps here; the smaller d must win.
  const DriftMinorization full(0.0, 0.0, LogMagnitude::one(), 0.0);
  const std::vector<double> tie_d{2000.0, 1000.0}, tie_r{0.5};
  const auto tie = rosenthal_grid_optimize(full, 0.01, tie_d, tie_r);
  CHECK(tie.steps == StepCount(2));
  CHECK(tie.best.d == 1000.0);

  const std::vector<double> bad_d{0.5};
  CHECK_THROWS_AS(rosenthal_grid_optimize(cert, 0.01, bad_d, one_r), Error);
}

TEST_CASE("two-term bound") {
  const auto l = two_term_min_steps(0.99986, 0.998497, 2.0, 0.01);
  CHECK(l >= StepCount(32891));
  CHECK(l <= StepCount(32895));
  CHECK(two_term_bound(0.99986, 0.998497, 2.0, StepCount(34000)) <= 0.01);
  CHECK(two_term_min_steps(0.5, 0.9, 0.0, 0.5) == StepCount(1));
  CHECK(two_term_bound(0.7, 0.2, 3.0, StepCount(0)) == Approx(4.0));
  auto before = l;
  --before;
  CHECK(two_term_bound(0.99986, 0.998497, 2.0, before) > 0.01);
}

TEST_CASE("random-scan lower bound") {
  CHECK(random_scan_lower(1, StepCount(1)).value == Approx(2.0 / 9));
  CHECK(random_scan_lower(100, StepCount(112)).value == Approx(std::pow(1.0 - 1.0 / 102, 112) / 3));
  double previous = 1.0;
  for (std::uint64_t l = 1; l < 300; ++l) {
    const double v = random_scan_lower(7, StepCount(l)).value;
    CHECK(v <= previous);
    previous = v;
  }
}

TEST_CASE("random-scan upper bound") {
  const auto v = random_scan_upper(4, StepCount(3));
  const double expected = 3 * std::exp(-0.25) + 10 * std::sqrt(1.5) * std::pow(0.5 + 0.5 * std::sqrt(2.0 / 3), 2);
  CHECK(v.value == Approx(expected));
  CHECK(v.value == Approx(12.44).epsilon(1e-3));
  CHECK(v.vacuous);
  try {
    random_scan_upper(4, StepCount(2));
    FAIL("expected a validity error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::below_validity);
  }
  CHECK(random_scan_upper(10, StepCount(50), 0.2).applicability_warning);
  CHECK_FALSE(random_scan_upper(10, StepCount(50), 0.7).applicability_warning);

  // Far out the second term dominates and decays at the random-scan eigenvalue.
  const double rate = random_scan_rate(20);
  const double a = random_scan_upper(20, StepCount(3000)).value;
  const double b = random_scan_upper(20, StepCount(3001)).value;
  CHECK(b / a == Approx(rate).epsilon(1e-9));
}

TEST_CASE("random-scan lower bound stays below the upper bound") {
  for (int n = 2; n <= 40; ++n) {
    for (auto l = random_scan_upper_threshold(n); l <= 2000; l += 3) {
      const double upper = random_scan_upper(n, StepCount(l)).value;
      if (upper >= 1.0) continue;
      CHECK(random_scan_lower(n, StepCount(l)).value <= upper);
    }
  }
}

TEST_CASE("systematic upper bound") {
  CHECK(systematic_upper(16, StepCount(3), SystematicScan::k).value == Approx(10 * std::pow(8.0 / 9, 3)));
  const double ratio = systematic_upper(16, StepCount(3), SystematicScan::ktilde).value /
                       systematic_upper(16, StepCount(3), SystematicScan::k).value;
  CHECK(ratio == Approx(std::pow(8.0 / 9, -0.5)));
  CHECK_THROWS_AS(systematic_upper(16, StepCount(2), SystematicScan::k), Error);
}

TEST_CASE("systematic bound dominates the exact chain") {
  for (int n = 4; n <= 24; ++n) {
    const auto chain = bb_xchain(BetaBinomialFamily(n));
    const auto curve = worst_start_tv_curve(chain.kernel, chain.stationary, 400);
    for (auto l = systematic_threshold(n); l <= 400; ++l) {
      const double bound = systematic_upper(n, StepCount(l), SystematicScan::k).value;
      if (bound < 1e-12) break;
      CHECK(curve[l] <= bound);
    }
  }
}

TEST_CASE("chi-square bound for the Poisson/gamma chain") {
  const auto chain = pg_xchain(PoissonGammaFamily(1.0, 1.0, 400));
  CHECK(chisq_bound_pg(chain.stationary, 0, StepCount(5)).value == Approx(std::sqrt(2.0) / 32).epsilon(1e-10));
  const auto zero = chisq_bound_pg(chain.stationary, 0, StepCount(0));
  CHECK(zero.value == Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(zero.vacuous);
  for (int j = 2; j <= 60; ++j) {
    const auto a = chisq_bound_min_steps(chain.stationary, 0.5, j, 0.01);
    const auto b = chisq_bound_min_steps(chain.stationary, 0.5, j - 2, 0.01);
    CHECK(a == b + StepCount(1));
  }
  for (int j : {0, 1, 5, 20, 40, 60}) {
    const auto exact = start_tv_curve(chain.kernel, static_cast<std::size_t>(j), chain.stationary, 200);
    for (std::size_t l = 0; l <= 200; ++l) {
      // Exact TV bottoms out near 2e-14 from summing 200 rounded terms.
      CHECK(exact[l] <= chisq_bound_pg(chain.stationary, j, StepCount(l)).value + 1e-13);
    }
  }
}

TEST_CASE("scan time ratio") {
  // The rate ratio tends to 4; counting a sweep as two updates halves it.
  const double r100 = scan_time_ratio(100);
  CHECK(r100 == Approx(std::log(100.0 / 102) / std::log(0.5 + 0.5 * std::sqrt(100.0 / 102))));
  CHECK(r100 > 4.0);
  CHECK(r100 < 4.02);
  CHECK(scan_time_ratio(100000) == Approx(4.0).epsilon(1e-4));
  const double r1 = scan_time_ratio(1);
  CHECK(std::isfinite(r1));
  CHECK(r1 > 1.0);
  CHECK(scan_time_ratio_per_update(100) == Approx(r100 / 2));
}

TEST_CASE("bound curves") {
  const auto curve = systematic_upper_curve(16, SystematicScan::k);
  CHECK(curve.valid_from == StepCount(3));
  CHECK(curve.evaluate(StepCount(3)).value() == Approx(10 * std::pow(8.0 / 9, 3)));
  const auto rc = rosenthal_curve(n100_certificate(), {1000.0, 0.001});
  CHECK(rc.evaluate(StepCount(5)).value() ==
        Approx(rosenthal_bound(n100_certificate(), {1000.0, 0.001}, StepCount(5)).value.value()));
}
