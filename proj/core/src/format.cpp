#include "gibbsrate/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gibbsrate {

double round_significant(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return std::strtod(buf, nullptr);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

LogMagnitude::Decimal rounded_decimal(const LogMagnitude& m) {
  auto d = m.decimal();
  d.mantissa = round_significant(d.mantissa);
  if (d.mantissa >= 10.0) {
    d.mantissa /= 10.0;
    ++d.exponent;
  }
  return d;
}

std::string format_scientific(const LogMagnitude& m) {
  if (m.is_zero()) return "0";
  const auto d = rounded_decimal(m);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*fe%+lld", kSignificantDigits - 1, d.mantissa,
                static_cast<long long>(d.exponent));
  return buf;
}

}  // namespace gibbsrate
