#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace gibbsrate {

/// A nonnegative quantity stored as its natural logarithm. Zero is encoded
/// as -infinity. Used for every bound value so that 2^-100 scale constants
/// and 10^33 scale step counts stay representable.
class LogMagnitude {
 public:
  constexpr LogMagnitude() = default;

  static LogMagnitude from_log(double log_value);
  static LogMagnitude from_value(double value);
  static constexpr LogMagnitude zero() { return LogMagnitude(); }
  static constexpr LogMagnitude one() {
    LogMagnitude m;
    m.log_ = 0.0;
    return m;
  }

  double log() const noexcept { return log_; }
  double log10() const noexcept;
  double value() const noexcept;
  bool is_zero() const noexcept { return log_ == -std::numeric_limits<double>::infinity(); }

  /// Decimal scientific form: value = mantissa * 10^exponent, mantissa in [1, 10).
  struct Decimal {
    double mantissa = 0.0;
    std::int64_t exponent = 0;
  };
  Decimal decimal() const noexcept;

  LogMagnitude& operator+=(const LogMagnitude& rhs) noexcept;
  LogMagnitude& operator*=(const LogMagnitude& rhs) noexcept;
  LogMagnitude& operator/=(const LogMagnitude& rhs);

  friend LogMagnitude operator+(LogMagnitude a, const LogMagnitude& b) noexcept { return a += b; }
  friend LogMagnitude operator*(LogMagnitude a, const LogMagnitude& b) noexcept { return a *= b; }
  friend LogMagnitude operator/(LogMagnitude a, const LogMagnitude& b) { return a /= b; }

  LogMagnitude pow(double exponent) const;

  friend bool operator==(const LogMagnitude& a, const LogMagnitude& b) noexcept {
    return a.log_ == b.log_;
  }
  friend std::partial_ordering operator<=>(const LogMagnitude& a, const LogMagnitude& b) noexcept {
    return a.log_ <=> b.log_;
  }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

/// log(exp(a) + exp(b)) without overflow.
double log_sum_exp(double a, double b) noexcept;

/// log(1 - x) for x in [0, 1], accurate for tiny x.
double log1m(double x) noexcept;

}  // namespace gibbsrate
