#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gibbsrate {

/// Nonnegative step count of arbitrary magnitude. Solvers work with counts
/// up to 10^40, well past 64 bits.
class StepCount {
 public:
  using Int = boost::multiprecision::cpp_int;

  StepCount() = default;
  explicit StepCount(std::uint64_t v) : value_(v) {}
  explicit StepCount(Int v);

  static StepCount pow10(unsigned exponent);

  const Int& value() const noexcept { return value_; }
  long double to_long_double() const;
  std::optional<std::uint64_t> to_u64() const;
  double log10() const;
  std::string str() const { return value_.str(); }

  StepCount& operator++() {
    ++value_;
    return *this;
  }
  StepCount& operator--();

  friend StepCount operator+(const StepCount& a, const StepCount& b) { return StepCount(Int(a.value_ + b.value_)); }
  friend bool operator==(const StepCount& a, const StepCount& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const StepCount& a, const StepCount& b) {
    const int c = a.value_.compare(b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Int value_ = 0;
};

}  // namespace gibbsrate
