#include "gibbsrate/log_magnitude.hpp"

#include <cmath>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(double a, double b) noexcept {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log1m(double x) noexcept { return std::log1p(-x); }

LogMagnitude LogMagnitude::from_log(double log_value) {
  if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity()) {
    throw Error(Errc::domain, "log magnitude must be finite or -inf");
  }
  LogMagnitude m;
  m.log_ = log_value;
  return m;
}

LogMagnitude LogMagnitude::from_value(double value) {
  if (!(value >= 0.0) || std::isinf(value)) {
    throw Error(Errc::domain, "log magnitude needs a finite nonnegative value");
  }
  LogMagnitude m;
  m.log_ = value == 0.0 ? kNegInf : std::log(value);
  return m;
}

double LogMagnitude::log10() const noexcept { return log_ / std::log(10.0); }

double LogMagnitude::value() const noexcept { return std::exp(log_); }

LogMagnitude::Decimal LogMagnitude::decimal() const noexcept {
  if (is_zero()) return {};
  const double l10 = log10();
  auto exponent = static_cast<std::int64_t>(std::floor(l10));
  double mantissa = std::pow(10.0, l10 - static_cast<double>(exponent));
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    ++exponent;
  }
  return {mantissa, exponent};
}

LogMagnitude& LogMagnitude::operator+=(const LogMagnitude& rhs) noexcept {
  log_ = log_sum_exp(log_, rhs.log_);
  return *this;
}

LogMagnitude& LogMagnitude::operator*=(const LogMagnitude& rhs) noexcept {
  if (is_zero() || rhs.is_zero()) {
    log_ = kNegInf;
  } else {
    log_ += rhs.log_;
  }
  return *this;
}

LogMagnitude& LogMagnitude::operator/=(const LogMagnitude& rhs) {
  if (rhs.is_zero()) throw Error(Errc::domain, "division by a zero magnitude");
  if (!is_zero()) log_ -= rhs.log_;
  return *this;
}

LogMagnitude LogMagnitude::pow(double exponent) const {
  if (std::isnan(exponent)) throw Error(Errc::domain, "NaN exponent");
  if (exponent == 0.0) return one();
  if (is_zero()) {
    if (exponent < 0.0) throw Error(Errc::domain, "zero raised to a negative power");
    return zero();
  }
  return from_log(log_ * exponent);
}

}  // namespace gibbsrate
