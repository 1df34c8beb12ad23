#include <cmath>
#include <map>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "gibbsrate/errors.hpp"
#include "gibbsrate/random.hpp"
#include "gibbsrate/sampler.hpp"
#include "gibbsrate/spectral.hpp"
#include "gibbsrate/words.hpp"

using namespace gibbsrate;
using doctest::Approx;

namespace {

// Reduction by collapsing runs of equal letters in the "P1P2..." text form.
std::string reduce_text(const std::string& text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const auto letter = text.substr(i, 2);
    if (out.size() < 2 || out.substr(out.size() - 2) != letter) out += letter;
  }
  return out;
}

std::string word_text(unsigned mask, int length) {
  std::string s;
  for (int i = length - 1; i >= 0; --i) s += (mask >> i) & 1u ? "P2" : "P1";
  return s;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

}  // namespace

TEST_CASE("word reduction") {
  CHECK(word_reduce(Word::parse("P1P1P2P2")) == Word::parse("P1P2"));
  CHECK(word_reduce(Word::parse("P1P2P1")) == Word::parse("P1P2P1"));
  CHECK(word_reduce(Word::parse("")).letters.empty());
  CHECK(Word::parse("P2P1").str() == "P2P1");
  CHECK_THROWS_AS(Word::parse("P3"), Error);
}

TEST_CASE("word reduction is idempotent and matches run collapsing") {
  for (int length = 0; length <= 12; ++length) {
    for (unsigned mask = 0; mask < (1u << length); ++mask) {
      const auto text = word_text(mask, length);
      const auto once = word_reduce(Word::parse(text));
      CHECK(word_reduce(once) == once);
      CHECK(once.is_reduced());
      CHECK(once.str() == reduce_text(text));
    }
  }
}

TEST_CASE("collapse census small lengths") {
  const auto c3 = collapse_census(3);
  std::map<std::string, std::uint64_t> got;
  for (const auto& [w, n] : c3.counts) got[w.str()] = n;
  const std::map<std::string, std::uint64_t> expected{{"P1", 1},     {"P1P2", 2}, {"P1P2P1", 1},
                                                      {"P2", 1},     {"P2P1", 2}, {"P2P1P2", 1}};
  CHECK(got == expected);
  CHECK(collapse_census(5).count(ReducedWord::of(Word::parse("P1P2"))) == 4);
  const auto c1 = collapse_census(1);
  CHECK(c1.counts.size() == 2);
  CHECK(c1.total() == 2);
  CHECK_THROWS_AS(collapse_census(21), Error);
  CHECK_THROWS_AS(collapse_census(0), Error);
}

TEST_CASE("collapse census against brute force and binomial counts") {
  for (int l = 1; l <= 14; ++l) {
    std::map<std::string, std::uint64_t> brute;
    for (unsigned mask = 0; mask < (1u << l); ++mask) ++brute[reduce_text(word_text(mask, l))];
    const auto census = collapse_census(l);
    CHECK(census.total() == (std::uint64_t{1} << l));
    for (const auto& [w, n] : census.counts) CHECK(brute.at(w.str()) == n);
    for (auto first : {Letter::P1, Letter::P2}) {
      for (int j = 1; 2 * j <= l; ++j) {
        CHECK(census.count({first, 2 * j}) == choose(l - 1, 2 * j - 1));
        if (2 * j + 1 <= l) CHECK(census.count({first, 2 * j + 1}) == choose(l - 1, 2 * j));
      }
    }
  }
}

TEST_CASE("scan-weight multipliers") {
  const auto m3 = alpha_multipliers(3);
  const auto c3 = collapse_census(3);
  for (const auto& [w, poly] : m3) CHECK(poly.exact(Rational(1, 2)) == Rational(c3.count(w), 8));

  const auto m2 = alpha_multipliers(2);
  const auto& p1p2 = m2.at(ReducedWord::of(Word::parse("P1P2")));
  for (double a : {0.1, 0.3, 0.77}) CHECK(p1p2(a) == Approx(a * (1 - a)));

  for (int l = 1; l <= 12; ++l) {
    const auto m = alpha_multipliers(l);
    for (double a : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      double total = 0.0;
      for (const auto& [w, poly] : m) total += poly(a);
      CHECK(total == Approx(1.0).epsilon(1e-12));
    }
    Rational exact_total = 0;
    for (const auto& [w, poly] : m) exact_total += poly.exact(Rational(2, 7));
    CHECK(exact_total == Rational(1));
  }
}

TEST_CASE("sampler steps are reproducible") {
  const ConjugateFamily fam = BetaBinomialFamily(1);
  auto rng_a = substream(2024, 0);
  auto rng_b = substream(2024, 0);
  JointState a{1, 0.3}, b{1, 0.3};
  for (int i = 0; i < 50; ++i) {
    a = step(fam, a, ScanStrategy::random(0.5), rng_a);
    b = step(fam, b, ScanStrategy::random(0.5), rng_b);
  }
  CHECK(a == b);
  // Pinned for libstdc++'s variate algorithms; another standard library draws differently.
  CHECK(a.x == 1);
  CHECK(a.theta == 0.8540954077013736);
  const auto p1 = simulate_trajectory(fam, {0, 0.5}, ScanStrategy::systematic_k(), 25, 9);
  const auto p2 = simulate_trajectory(fam, {0, 0.5}, ScanStrategy::systematic_k(), 25, 9);
  CHECK(p1 == p2);
  CHECK(p1.size() == 26);
}

TEST_CASE("degenerate scan weights freeze one coordinate") {
  const ConjugateFamily fam = BetaBinomialFamily(6);
  const auto theta_only = simulate_trajectory(fam, {2, 0.4}, ScanStrategy::random(1.0), 200, 3);
  for (const auto& s : theta_only) CHECK(s.x == 2);
  const auto x_only = simulate_trajectory(fam, {2, 0.4}, ScanStrategy::random(0.0), 200, 3);
  for (const auto& s : x_only) CHECK(s.theta == 0.4);
  CHECK_THROWS_AS(ScanStrategy::random(1.5), Error);
}

TEST_CASE("state validation") {
  const ConjugateFamily bb = BetaBinomialFamily(3);
  CHECK_THROWS_AS(validate_state(bb, {4, 0.5}), Error);
  CHECK_THROWS_AS(validate_state(bb, {1, 1.5}), Error);
  const ConjugateFamily pg = PoissonGammaFamily(1.0, 1.0, 200);
  CHECK_THROWS_AS(validate_state(pg, {-1, 0.5}), Error);
  CHECK_THROWS_AS(validate_state(pg, {0, -0.5}), Error);
  CHECK_NOTHROW(validate_state(pg, {5, 2.5}));
}

TEST_CASE("Poisson/gamma trajectories stay on the state space") {
  const ConjugateFamily pg = PoissonGammaFamily(1.0, 1.0, 200);
  const auto path = simulate_trajectory(pg, {3, 1.0}, ScanStrategy::systematic_ktilde(), 500, 4);
  for (const auto& s : path) {
    CHECK(s.x >= 0);
    CHECK(s.theta >= 0.0);
  }
}

TEST_CASE("systematic x-marginal fits the uniform stationary law") {
  // Thinned single trajectory; lambda2^thin is below 1e-3 for n <= 5.
  constexpr std::size_t kSamples = 100'000;
  constexpr std::size_t kThin = 25;
  constexpr std::size_t kBurnIn = 1000;
  for (int n = 1; n <= 5; ++n) {
    const ConjugateFamily fam = BetaBinomialFamily(n);
    const auto path =
        simulate_trajectory(fam, {0, 0.5}, ScanStrategy::systematic_ktilde(), kBurnIn + kSamples * kThin, 100 + n);
    std::vector<double> counts(n + 1, 0.0);
    for (std::size_t i = 0; i < kSamples; ++i) counts[path[kBurnIn + (i + 1) * kThin].x] += 1.0;
    const double expected = static_cast<double>(kSamples) / (n + 1);
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(n);
    CHECK(boost::math::cdf(boost::math::complement(dist, stat)) > 1e-3);
  }
}

TEST_CASE("eigenfunction decay") {
  const BetaBinomialFamily n10(10);
  const auto zero = eigenfunction_decay(n10, {0, 0.9}, 0.5, 0, 1000, 1);
  CHECK(zero.estimate == bb_eigenfunction_phi(n10, 0, 0.9));
  CHECK(zero.std_error == 0.0);

  const double lambda10 = 0.5 + 0.5 * std::sqrt(10.0 / 12.0);
  const auto five = eigenfunction_decay(n10, {0, 0.9}, 0.5, 5, 100'000, 7, 2);
  CHECK(std::abs(five.estimate - std::pow(lambda10, 5) * bb_eigenfunction_phi(n10, 0, 0.9)) <= 3 * five.std_error);

  const BetaBinomialFamily n1(1);
  CHECK(bb_eigenfunction_phi(n1, 1, 0.5) == Approx(0.5));
  const double lambda1 = scan_eigenvalue_pair(0.5, 1.0 / 3).first;
  for (std::size_t l : {1u, 4u, 9u}) {
    const auto est = eigenfunction_decay(n1, {1, 0.5}, 0.5, l, 20'000, 11);
    CHECK(std::abs(est.estimate - std::pow(lambda1, static_cast<double>(l)) * 0.5) <= 3 * est.std_error);
  }

  CHECK_THROWS_AS(eigenfunction_decay(n10, {0, 0.9}, 0.5, 3, 10, 1), Error);
  CHECK_THROWS_AS(eigenfunction_decay(BetaBinomialFamily(3, 2.0, 2.0), {0, 0.9}, 0.5, 3, 1000, 1), Error);
}

TEST_CASE("eigenfunction decay does not depend on the thread count") {
  const BetaBinomialFamily fam(4);
  const auto one = eigenfunction_decay(fam, {0, 1.0}, 0.5, 6, 3000, 99, 1);
  const auto three = eigenfunction_decay(fam, {0, 1.0}, 0.5, 6, 3000, 99, 3);
  CHECK(one.estimate == three.estimate);
  CHECK(one.std_error == three.std_error);
}
