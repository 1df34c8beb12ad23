#include "gibbsrate/words.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace {

void require_length(int length) {
  if (length < 1 || length > kMaxEnumeratedLength) {
    throw Error(Errc::range, "word length must lie in [1, 20]");
  }
}

Letter other(Letter l) noexcept { return l == Letter::P1 ? Letter::P2 : Letter::P1; }

Word word_from_bits(std::uint32_t bits, int length) {
  Word w;
  w.letters.resize(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    w.letters[static_cast<std::size_t>(i)] = ((bits >> (length - 1 - i)) & 1U) ? Letter::P2 : Letter::P1;
  }
  return w;
}

template <class Visit>
void enumerate_words(int length, Visit&& visit) {
  const std::uint32_t count = 1U << length;
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    const Word w = word_from_bits(bits, length);
    const int p2 = std::popcount(bits);
    visit(ReducedWord::of(w), length - p2);
  }
}

}  // namespace

Word Word::parse(std::string_view text) {
  Word w;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    if (i + 1 >= text.size() || text[i] != 'P' || (text[i + 1] != '1' && text[i + 1] != '2')) {
      throw Error(Errc::invalid_argument, "words are spelled with P1 and P2 only");
    }
    w.letters.push_back(text[i + 1] == '1' ? Letter::P1 : Letter::P2);
  }
  return w;
}

std::string Word::str() const {
  std::string s;
  s.reserve(letters.size() * 2);
  for (Letter l : letters) s += l == Letter::P1 ? "P1" : "P2";
  return s;
}

bool Word::is_reduced() const noexcept {
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i] == letters[i - 1]) return false;
  }
  return true;
}

Word word_reduce(const Word& w) {
  Word out;
  for (Letter l : w.letters) {
    if (out.letters.empty() || out.letters.back() != l) out.letters.push_back(l);
  }
  return out;
}

ReducedWord ReducedWord::of(const Word& w) {
  const Word r = word_reduce(w);
  if (r.letters.empty()) return {};
  return {r.letters.front(), static_cast<int>(r.letters.size())};
}

Word ReducedWord::expand() const {
  Word w;
  Letter l = first;
  for (int i = 0; i < length; ++i) {
    w.letters.push_back(l);
    l = other(l);
  }
  return w;
}

std::uint64_t CollapseCensus::total() const noexcept {
  std::uint64_t s = 0;
  for (const auto& [word, c] : counts) s += c;
  return s;
}

std::uint64_t CollapseCensus::count(const ReducedWord& w) const noexcept {
  const auto it = counts.find(w);
  return it == counts.end() ? 0 : it->second;
}

CollapseCensus collapse_census(int length) {
  require_length(length);
  CollapseCensus census;
  census.length = length;
  enumerate_words(length, [&](const ReducedWord& r, int) { ++census.counts[r]; });
  return census;
}

double MultiplierPolynomial::operator()(double alpha) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] == 0) continue;
    s += static_cast<double>(coefficients[i]) * std::pow(alpha, static_cast<double>(i)) *
         std::pow(1.0 - alpha, static_cast<double>(length) - static_cast<double>(i));
  }
  return s;
}

Rational MultiplierPolynomial::exact(const Rational& alpha) const {
  Rational s = 0;
  const Rational beta = Rational(1) - alpha;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] == 0) continue;
    Rational term = Rational(coefficients[i]);
    for (std::size_t k = 0; k < i; ++k) term *= alpha;
    for (std::size_t k = i; k < static_cast<std::size_t>(length); ++k) term *= beta;
    s += term;
  }
  return s;
}

std::uint64_t MultiplierPolynomial::coefficient_sum() const noexcept {
  std::uint64_t s = 0;
  for (auto c : coefficients) s += c;
  return s;
}

std::map<ReducedWord, MultiplierPolynomial> alpha_multipliers(int length) {
  require_length(length);
  std::map<ReducedWord, MultiplierPolynomial> out;
  enumerate_words(length, [&](const ReducedWord& r, int p1_count) {
    auto& poly = out[r];
    if (poly.coefficients.empty()) {
      poly.length = length;
      poly.coefficients.assign(static_cast<std::size_t>(length) + 1, 0);
    }
    ++poly.coefficients[static_cast<std::size_t>(p1_count)];
  });
  return out;
}

}  // namespace gibbsrate
