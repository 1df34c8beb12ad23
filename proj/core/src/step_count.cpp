#include "gibbsrate/step_count.hpp"

#include <cmath>
#include <limits>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

StepCount::StepCount(Int v) : value_(std::move(v)) {
  if (value_ < 0) throw Error(Errc::domain, "step counts are nonnegative");
}

StepCount StepCount::pow10(unsigned exponent) {
  return StepCount(Int(boost::multiprecision::pow(Int(10), exponent)));
}

long double StepCount::to_long_double() const { return value_.convert_to<long double>(); }

std::optional<std::uint64_t> StepCount::to_u64() const {
  if (value_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return value_.convert_to<std::uint64_t>();
}

double StepCount::log10() const {
  if (value_ == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(std::log10(to_long_double()));
}

StepCount& StepCount::operator--() {
  if (value_ == 0) throw Error(Errc::domain, "decrement below zero");
  --value_;
  return *this;
}

}  // namespace gibbsrate
