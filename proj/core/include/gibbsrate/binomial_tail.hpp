#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace gibbsrate {

using Rational = boost::multiprecision::cpp_rational;

/// sum_{j=0}^{cutoff} C(length, j) / 2^length, exactly. Requires
/// 0 <= cutoff <= length <= 64.
Rational binomial_tail_le(int length, int cutoff);

/// The Azuma-type tail fact: the lower-quarter binomial tail at
/// floor(length/4) against e^{-length/8}, compared in 50-digit arithmetic.
struct AzumaCheck {
  int length = 0;
  int cutoff = 0;
  Rational tail;
  double tail_value = 0.0;
  double bound_value = 0.0;
  bool holds = false;
};

AzumaCheck azuma_tail_check(int length);

}  // namespace gibbsrate
