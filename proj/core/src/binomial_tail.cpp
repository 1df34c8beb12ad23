#include "gibbsrate/binomial_tail.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace mp = boost::multiprecision;

Rational binomial_tail_le(int length, int cutoff) {
  if (length < 0 || length > 64 || cutoff < 0 || cutoff > length) {
    throw Error(Errc::range, "binomial tail needs 0 <= cutoff <= length <= 64");
  }
  mp::cpp_int numerator = 0;
  mp::cpp_int choose = 1;  // C(length, j)
  for (int j = 0; j <= cutoff; ++j) {
    numerator += choose;
    choose = choose * (length - j) / (j + 1);
  }
  const mp::cpp_int denominator = mp::cpp_int(1) << length;
  return Rational(numerator, denominator);
}

AzumaCheck azuma_tail_check(int length) {
  if (length < 1 || length > 64) throw Error(Errc::range, "Azuma check defined for 1 <= length <= 64");
  AzumaCheck c;
  c.length = length;
  c.cutoff = length / 4;
  c.tail = binomial_tail_le(length, c.cutoff);

  using Dec = mp::cpp_dec_float_50;
  const Dec tail = Dec(mp::numerator(c.tail)) / Dec(mp::denominator(c.tail));
  const Dec bound = mp::exp(Dec(-length) / 8);
  c.holds = tail <= bound;
  c.tail_value = tail.convert_to<double>();
  c.bound_value = bound.convert_to<double>();
  return c;
}

}  // namespace gibbsrate
