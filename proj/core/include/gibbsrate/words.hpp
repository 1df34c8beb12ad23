#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gibbsrate/binomial_tail.hpp"

namespace gibbsrate {

/// The two projections of a two-component Gibbs sampler; both idempotent.
enum class Letter : std::uint8_t { P1, P2 };

/// Product of projections, left to right.
struct Word {
  std::vector<Letter> letters;

  /// Parses "P1P2P1"-style text; the empty string is the empty word.
  static Word parse(std::string_view text);
  std::string str() const;
  bool is_reduced() const noexcept;

  friend bool operator==(const Word&, const Word&) = default;
};

/// Collapses each maximal run of equal letters to one letter.
Word word_reduce(const Word& w);

/// A reduced word alternates, so its first letter and length determine it.
struct ReducedWord {
  Letter first = Letter::P1;
  int length = 0;

  static ReducedWord of(const Word& w);  // reduces first
  Word expand() const;
  std::string str() const { return expand().str(); }

  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;
};

struct CollapseCensus {
  int length = 0;
  std::map<ReducedWord, std::uint64_t> counts;

  std::uint64_t total() const noexcept;
  std::uint64_t count(const ReducedWord& w) const noexcept;
};

inline constexpr int kMaxEnumeratedLength = 20;

/// Reduces every one of the 2^length words and tallies the results.
CollapseCensus collapse_census(int length);

/// Sum over raw words of alpha^{#P1} (1 - alpha)^{#P2}; coefficients[i]
/// multiplies alpha^i (1 - alpha)^{length - i}.
struct MultiplierPolynomial {
  int length = 0;
  std::vector<std::uint64_t> coefficients;

  double operator()(double alpha) const;
  Rational exact(const Rational& alpha) const;
  std::uint64_t coefficient_sum() const noexcept;
};

std::map<ReducedWord, MultiplierPolynomial> alpha_multipliers(int length);

}  // namespace gibbsrate
