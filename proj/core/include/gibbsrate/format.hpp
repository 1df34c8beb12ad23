#pragma once

#include <string>

#include "gibbsrate/log_magnitude.hpp"
#include "gibbsrate/step_count.hpp"

namespace gibbsrate {

inline constexpr int kSignificantDigits = 12;

/// v rounded to 12 significant digits (round trip through "%.12g").
double round_significant(double v);

/// "%.12g"; non-finite values print as "nan", "inf" or "-inf".
std::string format_number(double v);

/// Mantissa rounded to 12 significant digits, carrying into the exponent
/// when it rounds up to 10.
LogMagnitude::Decimal rounded_decimal(const LogMagnitude& m);

/// "m.mmmmmmmmmmme+X" from a log magnitude, exact in the exponent even when
/// the value itself overflows a double.
std::string format_scientific(const LogMagnitude& m);

}  // namespace gibbsrate
